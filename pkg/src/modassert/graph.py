"""Inter-module structure extraction from parsed RTL.

From a SourceUnit this module computes, deterministically:

* the instance edges between module types (who instantiates whom),
* the port table of every module,
* the signal-propagation hops, both across instance boundaries and through
  assigns/always blocks, elaborated per instance path, and
* a per-net fan-in relation used for cone-of-influence queries.

Dependency granularity is per-net (sound over-approximation): every signal
read inside an always block, including condition guards, counts as fan-in of
every signal written by the block.

Hierarchical display names: nets of the root module are written
"<root>.<signal>"; nets of an instantiated module use the instance path,
e.g. "u1.x" or "u1.v2.y".
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rtl import (
    AlwaysBlock, Block, BlockingAssign, Case, ContAssign, Expr, Ident, If,
    Index, InstanceDecl, ModuleDecl, NonblockingAssign, PortDecl, RangeSelect,
    SourceUnit, Stmt, expr_idents,
)


class RecursiveInstantiation(Exception):
    pass


class AmbiguousRoot(Exception):
    def __init__(self, candidates: list[str]):
        super().__init__(f"multiple root candidates: {', '.join(candidates)}")
        self.candidates = candidates


class UnknownSignal(Exception):
    def __init__(self, names: list[str]):
        super().__init__(f"unknown signal(s): {', '.join(names)}")
        self.names = names


class UnknownModule(Exception):
    pass


@dataclass(frozen=True)
class SignalHop:
    from_module: str
    from_path: str
    from_signal: str
    to_module: str
    to_path: str
    to_signal: str
    via: str                  # port-connection | assign | always

    def endpoints(self) -> tuple[tuple[str, str, str], tuple[str, str, str]]:
        return ((self.from_module, self.from_path, self.from_signal),
                (self.to_module, self.to_path, self.to_signal))


@dataclass
class ConeOfInfluence:
    seed_signals: frozenset[str]
    members: frozenset[str]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class DesignGraph:
    root: str
    nodes: list[str]
    edges: list[tuple[str, str, str]]                 # (parent, instance, child)
    port_table: dict[str, list[PortDecl]]
    propagation: list[SignalHop]
    # fan-in: (module, net) -> set of (module, net, kind), kind in comb|seq|boundary
    net_dependency: dict[tuple[str, str], set[tuple[str, str, str]]]
    # instance path -> module type ("" is the root)
    path_table: dict[str, str] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def hier_name(self, path: str, signal: str) -> str:
        return f"{self.root}.{signal}" if path == "" else f"{path}.{signal}"

    def module_signals(self, module: str) -> set[str]:
        return set(self._signals.get(module, set()))

    def paths_of(self, module: str) -> list[str]:
        return sorted(p for p, m in self.path_table.items() if m == module)

    def resolve_hier(self, name: str) -> tuple[str, str, str] | None:
        """Resolve a hierarchical display name to (path, module, signal)."""
        candidates = [name]
        if name.startswith(self.root + "."):
            candidates.append(name[len(self.root) + 1:])
        for cand in candidates:
            if "." not in cand:
                if cand in self._signals.get(self.path_table.get("", ""), set()):
                    return ("", self.path_table[""], cand)
                continue
            prefix, sig = cand.rsplit(".", 1)
            if prefix == self.root and sig in self._signals.get(self.path_table.get("", ""), set()):
                return ("", self.path_table[""], sig)
            mod = self.path_table.get(prefix)
            if mod is not None and sig in self._signals.get(mod, set()):
                return (prefix, mod, sig)
        return None

    # populated by extract_relationships
    _signals: dict[str, set[str]] = field(default_factory=dict, repr=False)


def _stmt_reads_writes(stmt: Stmt | None) -> tuple[list[str], list[str]]:
    reads: list[str] = []
    writes: list[str] = []

    def add_reads(e: Expr | None) -> None:
        if e is not None:
            for n in expr_idents(e):
                if n not in reads:
                    reads.append(n)

    def target_of(e: Expr) -> None:
        # the written base identifier; index expressions are reads
        if isinstance(e, Ident):
            if e.name not in writes:
                writes.append(e.name)
        elif isinstance(e, (Index, RangeSelect)):
            if isinstance(e, Index):
                add_reads(e.index)
            else:
                add_reads(e.msb)
                add_reads(e.lsb)
            target_of(e.base)
        else:
            # concatenation targets: every part is written
            for part in getattr(e, "parts", []):
                target_of(part)

    def walk(s: Stmt | None) -> None:
        if s is None:
            return
        if isinstance(s, (BlockingAssign, NonblockingAssign)):
            target_of(s.target)
            add_reads(s.value)
        elif isinstance(s, If):
            add_reads(s.cond)
            walk(s.then)
            walk(s.else_)
        elif isinstance(s, Case):
            add_reads(s.subject)
            for item in s.items:
                for lab in item.labels:
                    add_reads(lab)
                walk(item.body)
        elif isinstance(s, Block):
            for sub in s.stmts:
                walk(sub)

    walk(stmt)
    return reads, writes


def extract_relationships(unit: SourceUnit, root_override: str | None = None) -> DesignGraph:
    """Compute the full inter-module structure of `unit`.

    Raises RecursiveInstantiation on cyclic module-type instantiation and
    AmbiguousRoot when the root cannot be determined.
    """
    if not unit.modules:
        raise UnknownModule("source unit has no modules")
    by_name = {m.name: m for m in unit.modules}
    warnings: list[str] = []

    # module-type instantiation graph + cycle check
    child_types: dict[str, list[str]] = {
        m.name: [i.child_module for i in m.instances] for m in unit.modules}
    state: dict[str, int] = {}

    def visit(name: str, stack: list[str]) -> None:
        if state.get(name) == 2:
            return
        if state.get(name) == 1:
            cycle = stack[stack.index(name):] + [name]
            raise RecursiveInstantiation(" -> ".join(cycle))
        state[name] = 1
        for c in child_types.get(name, []):
            if c in by_name:
                visit(c, stack + [name])
        state[name] = 2

    for m in unit.modules:
        visit(m.name, [])

    if root_override is not None:
        if root_override not in by_name:
            raise UnknownModule(f"root override '{root_override}' not in design")
        root = root_override
    else:
        instantiated = {c for kids in child_types.values() for c in kids}
        candidates = sorted(m.name for m in unit.modules if m.name not in instantiated)
        if len(candidates) != 1:
            raise AmbiguousRoot(candidates or sorted(by_name))
        root = candidates[0]

    # enumerate instance paths reachable from the root (declaration order)
    path_table: dict[str, str] = {"": root}
    edges: list[tuple[str, str, str]] = []
    nodes: list[str] = []
    queue: list[tuple[str, str]] = [("", root)]
    while queue:
        path, mname = queue.pop(0)
        if mname not in nodes:
            nodes.append(mname)
        mod = by_name.get(mname)
        if mod is None:
            continue
        for inst in mod.instances:
            cpath = inst.instance_name if path == "" else f"{path}.{inst.instance_name}"
            edge = (mname, inst.instance_name, inst.child_module)
            if edge not in edges:
                edges.append(edge)
            if inst.child_module not in by_name:
                msg = f"instance '{cpath}' refers to unknown module '{inst.child_module}'"
                if msg not in warnings:
                    warnings.append(msg)
                continue
            path_table[cpath] = inst.child_module
            queue.append((cpath, inst.child_module))

    port_table = {n: list(by_name[n].ports) for n in nodes if n in by_name}
    signals = {n: by_name[n].signal_names() for n in nodes if n in by_name}

    hops: list[SignalHop] = []
    net_dep: dict[tuple[str, str], set[tuple[str, str, str]]] = {}

    def dep(dst: tuple[str, str], src: tuple[str, str], kind: str) -> None:
        net_dep.setdefault(dst, set()).add((src[0], src[1], kind))

    # intra-module hops elaborated per path; net_dependency once per type
    for path in sorted(path_table):
        mname = path_table[path]
        mod = by_name[mname]
        declared = signals[mname]
        for item in mod.body_items:
            if isinstance(item, ContAssign):
                reads, writes = _stmt_reads_writes(BlockingAssign(item.target, item.value))
                kind, via = "comb", "assign"
            elif isinstance(item, AlwaysBlock):
                reads, writes = _stmt_reads_writes(item.body)
                kind = "seq" if item.is_sequential else "comb"
                via = "always"
            else:
                continue
            reads = [r for r in reads if r in declared]
            writes = [w for w in writes if w in declared]
            for w in writes:
                for r in reads:
                    hops.append(SignalHop(mname, path, r, mname, path, w, via))
                    dep((mname, w), (mname, r), kind)

    # boundary hops through instance connections, per path
    for path in sorted(path_table):
        mname = path_table[path]
        mod = by_name[mname]
        declared = signals[mname]
        for inst in mod.instances:
            child = by_name.get(inst.child_module)
            if child is None:
                continue
            cpath = inst.instance_name if path == "" else f"{path}.{inst.instance_name}"
            for formal, actual in inst.connections:
                if actual is None:
                    continue
                cport = child.port(formal)
                if cport is None:
                    msg = (f"connection to unknown port '{formal}' of "
                           f"'{inst.child_module}' in {mname}")
                    if msg not in warnings:
                        warnings.append(msg)
                    continue
                actual_ids = [n for n in expr_idents(actual) if n in declared]
                for a in actual_ids:
                    if cport.direction in ("input", "inout"):
                        hops.append(SignalHop(mname, path, a,
                                              child.name, cpath, formal,
                                              "port-connection"))
                        dep((child.name, formal), (mname, a), "boundary")
                    if cport.direction in ("output", "inout"):
                        hops.append(SignalHop(child.name, cpath, formal,
                                              mname, path, a,
                                              "port-connection"))
                        dep((mname, a), (child.name, formal), "boundary")

    graph = DesignGraph(root=root, nodes=nodes, edges=edges,
                        port_table=port_table, propagation=hops,
                        net_dependency=net_dep, path_table=path_table,
                        warnings=warnings)
    graph._signals = signals
    return graph


def _elaborated_fanin(graph: DesignGraph) -> dict[str, set[str]]:
    """Fan-in adjacency over hierarchical display names."""
    adj: dict[str, set[str]] = {}

    def add(dst: str, src: str) -> None:
        adj.setdefault(dst, set()).add(src)

    for path in sorted(graph.path_table):
        mname = graph.path_table[path]
        for (dmod, dnet), sources in sorted(
                graph.net_dependency.items(), key=lambda kv: kv[0]):
            if dmod != mname:
                continue
            for smod, snet, kind in sorted(sources):
                if kind == "boundary":
                    continue   # boundary edges come from hops (path-accurate)
                add(graph.hier_name(path, dnet), graph.hier_name(path, snet))
    for hop in graph.propagation:
        if hop.via == "port-connection":
            add(graph.hier_name(hop.to_path, hop.to_signal),
                graph.hier_name(hop.from_path, hop.from_signal))
    return adj


def cone_of_influence(graph: DesignGraph, seeds: set[str] | frozenset[str]) -> ConeOfInfluence:
    """Transitive fan-in closure of `seeds` over the elaborated dependency
    relation.  Seeds are hierarchical display names."""
    resolved: list[str] = []
    unknown: list[str] = []
    for s in sorted(seeds):
        r = graph.resolve_hier(s)
        if r is None:
            unknown.append(s)
        else:
            resolved.append(graph.hier_name(r[0], r[2]))
    if unknown:
        raise UnknownSignal(unknown)

    adj = _elaborated_fanin(graph)
    members: set[str] = set(resolved)
    frontier = list(resolved)
    while frontier:
        cur = frontier.pop()
        for src in adj.get(cur, ()):
            if src not in members:
                members.add(src)
                frontier.append(src)
    return ConeOfInfluence(frozenset(resolved), frozenset(members))


def relationship_digest(graph: DesignGraph, module: str) -> str:
    """Human/LLM-readable summary of one module's interface and context.

    Deterministic: ports in declaration order, instance lists sorted,
    byte-identical across runs.
    """
    if module not in graph.port_table:
        raise UnknownModule(f"module '{module}' not in design graph")
    lines = [f"Module: {module}"]
    ports = graph.port_table[module]
    lines.append("Ports (declaration order):")
    for p in ports:
        width = p.width_bits
        wtext = "width unresolved" if width is None else f"width {width}"
        lines.append(f"  - {p.name}: {p.direction}, {wtext}")
    parents = sorted({(pm, inst) for (pm, inst, cm) in graph.edges if cm == module})
    children = sorted({(cm, inst) for (pm, inst, cm) in graph.edges if pm == module})
    if parents:
        lines.append("Instantiated by: " +
                     ", ".join(f"{pm} (as {inst})" for pm, inst in parents))
    if children:
        lines.append("Instantiates: " +
                     ", ".join(f"{cm} (as {inst})" for cm, inst in children))
    else:
        lines.append("Instantiates: none (leaf module)")
    boundary = sorted(
        (h for h in graph.propagation
         if h.via == "port-connection" and module in (h.from_module, h.to_module)),
        key=lambda h: (h.from_path, h.from_signal, h.to_path, h.to_signal))
    if boundary:
        lines.append("Boundary signal flow:")
        for h in boundary:
            lines.append(f"  - {graph.hier_name(h.from_path, h.from_signal)}"
                         f" -> {graph.hier_name(h.to_path, h.to_signal)}")
    return "\n".join(lines) + "\n"
