"""Constant resolution of port and net widths.

Width range expressions are folded using parameter defaults (and localparams).
Per-instance parameter overrides additionally yield a per-instance view of the
child's port widths, stored on each InstanceDecl.
"""

from __future__ import annotations

from dataclasses import replace

from .nodes import (
    BinOp, Diagnostic, Expr, Ident, InstanceDecl, ModuleDecl, NetDecl, Number,
    ParamDecl, PortDecl, SourceUnit, Ternary, UNKNOWN_WIDTH, UnaryOp,
)


def eval_const(expr: Expr, env: dict[str, int]) -> int | None:
    """Fold `expr` to an integer using `env`; None if not constant."""
    if isinstance(expr, Number):
        return expr.int_value()
    if isinstance(expr, Ident):
        return env.get(expr.name)
    if isinstance(expr, UnaryOp):
        v = eval_const(expr.operand, env)
        if v is None:
            return None
        if expr.op == "-":
            return -v
        if expr.op == "+":
            return v
        if expr.op == "!":
            return 0 if v else 1
        if expr.op == "~":
            return ~v
        return None
    if isinstance(expr, BinOp):
        a = eval_const(expr.lhs, env)
        b = eval_const(expr.rhs, env)
        if a is None or b is None:
            return None
        try:
            return {
                "+": lambda: a + b,
                "-": lambda: a - b,
                "*": lambda: a * b,
                "/": lambda: a // b,
                "%": lambda: a % b,
                "<<": lambda: a << b,
                ">>": lambda: a >> b,
                ">>>": lambda: a >> b,
                "==": lambda: int(a == b),
                "!=": lambda: int(a != b),
                "<": lambda: int(a < b),
                "<=": lambda: int(a <= b),
                ">": lambda: int(a > b),
                ">=": lambda: int(a >= b),
                "&": lambda: a & b,
                "|": lambda: a | b,
                "^": lambda: a ^ b,
                "&&": lambda: int(bool(a) and bool(b)),
                "||": lambda: int(bool(a) or bool(b)),
            }[expr.op]()
        except (KeyError, ZeroDivisionError):
            return None
    if isinstance(expr, Ternary):
        c = eval_const(expr.cond, env)
        if c is None:
            return None
        return eval_const(expr.then if c else expr.other, env)
    return None


def param_env(mod: ModuleDecl, overrides: dict[str, int] | None = None) -> dict[str, int]:
    """Parameter environment from defaults, resolved in declaration order."""
    env: dict[str, int] = dict(overrides) if overrides else {}
    for p in mod.params:
        if p.name in env:
            continue
        v = eval_const(p.value, env)
        if v is not None:
            env[p.name] = v
    return env


def _resolve_range(msb: Expr | None, lsb: Expr | None,
                   env: dict[str, int]) -> tuple[int, int] | None:
    if msb is None:
        return None   # scalar
    m = eval_const(msb, env)
    l = eval_const(lsb, env)
    if m is None or l is None:
        return UNKNOWN_WIDTH
    return (m, l)


def resolve_widths(unit: SourceUnit) -> SourceUnit:
    """Return a new SourceUnit with resolved_width filled on every port and
    net, and per-instance child port widths on every instance.  Unresolvable
    widths get the unknown sentinel plus a diagnostic."""
    diags = list(unit.diagnostics)
    new_modules: list[ModuleDecl] = []
    by_name = {m.name: m for m in unit.modules}

    for mod in unit.modules:
        env = param_env(mod)
        port_map: dict[int, PortDecl] = {}
        net_map: dict[int, NetDecl] = {}
        for p in mod.ports:
            rw = _resolve_range(p.msb, p.lsb, env)
            if rw == UNKNOWN_WIDTH:
                diags.append(Diagnostic("warning", mod.file, p.line, 1,
                                        f"width of port '{p.name}' in {mod.name} "
                                        f"is not a resolvable constant"))
            port_map[id(p)] = replace(p, resolved_width=rw)
        for n in mod.nets:
            rw = _resolve_range(n.msb, n.lsb, env)
            if rw == UNKNOWN_WIDTH:
                diags.append(Diagnostic("warning", mod.file, n.line, 1,
                                        f"width of net '{n.name}' in {mod.name} "
                                        f"is not a resolvable constant"))
            net_map[id(n)] = replace(n, resolved_width=rw)

        inst_map: dict[int, InstanceDecl] = {}
        for inst in mod.instances:
            child = by_name.get(inst.child_module)
            widths: dict[str, tuple[int, int]] = {}
            if child is not None:
                ov: dict[str, int] = {}
                for name, vexpr in inst.param_overrides:
                    if name.startswith("$"):   # positional override
                        idx = int(name[1:])
                        if idx < len(child.params):
                            name = child.params[idx].name
                        else:
                            continue
                    v = eval_const(vexpr, env)
                    if v is not None:
                        ov[name] = v
                cenv = param_env(child, ov)
                for cp in child.ports:
                    rw = _resolve_range(cp.msb, cp.lsb, cenv)
                    if rw is None:
                        widths[cp.name] = (0, 0)
                    elif rw != UNKNOWN_WIDTH:
                        widths[cp.name] = rw
            inst_map[id(inst)] = replace(inst, port_widths=widths)

        new_body = []
        for item in mod.body_items:
            if id(item) in net_map:
                new_body.append(net_map[id(item)])
            elif id(item) in inst_map:
                new_body.append(inst_map[id(item)])
            else:
                new_body.append(item)
        new_modules.append(replace(
            mod,
            ports=[port_map[id(p)] for p in mod.ports],
            nets=[net_map[id(n)] for n in mod.nets],
            instances=[inst_map[id(i)] for i in mod.instances],
            body_items=new_body,
        ))

    return SourceUnit(files=list(unit.files), modules=new_modules, diagnostics=diags)
