"""Crew dispatch planning over a movement cost matrix.

The objective is cumulative restored power capacity: every area contributes
its capacity for each timeslot after all of its fault points are repaired,
summed up to the horizon. Work is measured in crew-timeslots and is
additive across crews, so several crews may repair one fault concurrently.

Travel legs are matrix entries taken as-is; a leg carrying the sentinel
value is inadmissible. Crews stay at a fault until it is repaired, then
move on. ``evaluate`` scores a fixed set of visit orders, ``solve_exact``
searches all of them with an admissible bound, ``solve_greedy`` mirrors
dispatch-on-discovery practice, ``brute_force`` is the enumeration oracle,
and ``replay`` executes a stale plan against the true post-blockage costs.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from .costmatrix import CostMatrix, load_matrix

FAULT_TYPES = ("pole", "wire")

#: Hard limits inside which brute_force is allowed to run.
ORACLE_MAX_CREWS, ORACLE_MAX_FAULTS, ORACLE_MAX_HORIZON = 2, 4, 15

#: Declared envelope inside which solve_exact guarantees optimality.
EXACT_MAX_CREWS, EXACT_MAX_FAULTS, EXACT_MAX_HORIZON = 6, 10, 60


class InfeasiblePlanError(ValueError):
    """A route set that cannot be executed on the given matrix."""


class InfeasibleInstanceError(ValueError):
    """An instance with faults no crew can ever reach."""


class EnvelopeExceededError(ValueError):
    """Instance outside the declared scale limits of an exact method."""


@dataclass(frozen=True)
class FaultPoint:
    site_id: int
    fault_type: str
    area_id: str
    required_work: int

    def __post_init__(self) -> None:
        if self.fault_type not in FAULT_TYPES:
            raise ValueError(f"fault {self.site_id}: unknown type {self.fault_type!r}")
        if self.required_work < 1:
            raise ValueError(f"fault {self.site_id}: required_work must be >= 1")


@dataclass(frozen=True)
class Area:
    area_id: str
    capacity_kw: float
    fault_ids: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.capacity_kw > 0:
            raise ValueError(f"area {self.area_id}: capacity must be > 0")


@dataclass(frozen=True)
class Crew:
    crew_id: int
    start_site: int
    end_site: int


@dataclass(frozen=True)
class VehiclePool:
    pole: int
    wire: int

    def __post_init__(self) -> None:
        if self.pole < 0 or self.wire < 0:
            raise ValueError("vehicle counts must be >= 0")

    def count(self, fault_type: str) -> int:
        return self.pole if fault_type == "pole" else self.wire


@dataclass
class Instance:
    matrix: CostMatrix
    faults: list[FaultPoint]
    areas: list[Area]
    crews: list[Crew]
    horizon: int = 60
    vehicles: VehiclePool | None = None
    must_return: bool = False

    def __post_init__(self) -> None:
        n = self.matrix.size
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        fault_ids = [f.site_id for f in self.faults]
        if len(set(fault_ids)) != len(fault_ids):
            raise ValueError("duplicate fault site ids")
        for f in self.faults:
            if not 0 <= f.site_id < n:
                raise ValueError(f"fault site {f.site_id} outside matrix of size {n}")
        area_ids = [a.area_id for a in self.areas]
        if len(set(area_ids)) != len(area_ids):
            raise ValueError("duplicate area ids")
        assigned: dict[int, str] = {}
        for a in self.areas:
            for fid in a.fault_ids:
                if fid in assigned:
                    raise ValueError(f"fault {fid} listed in areas {assigned[fid]} and {a.area_id}")
                assigned[fid] = a.area_id
        for f in self.faults:
            if assigned.get(f.site_id) != f.area_id:
                raise ValueError(
                    f"fault {f.site_id}: area_id {f.area_id!r} inconsistent with area listings"
                )
        fault_set = set(fault_ids)
        for a in self.areas:
            for fid in a.fault_ids:
                if fid not in fault_set:
                    raise ValueError(f"area {a.area_id} lists unknown fault {fid}")
        for c in self.crews:
            for site in (c.start_site, c.end_site):
                if not 0 <= site < n:
                    raise ValueError(f"crew {c.crew_id}: site {site} outside matrix")
            if c.start_site in fault_set or c.end_site in fault_set:
                raise ValueError(f"crew {c.crew_id}: depot sites must not be fault sites")
        if not self.crews and self.faults:
            raise ValueError("instance has faults but no crews")
        if self.vehicles is not None:
            for ft in FAULT_TYPES:
                if self.vehicles.count(ft) == 0 and any(f.fault_type == ft for f in self.faults):
                    raise InfeasibleInstanceError(
                        f"no {ft} vehicles but {ft} faults present"
                    )
        self._fault_by_site = {f.site_id: f for f in self.faults}
        self._area_by_id = {a.area_id: a for a in self.areas}

    @property
    def fault_by_site(self) -> dict[int, FaultPoint]:
        return self._fault_by_site

    @property
    def area_by_id(self) -> dict[str, Area]:
        return self._area_by_id


@dataclass(frozen=True)
class Visit:
    site_id: int
    arrival_slot: int
    completion_slot: int


@dataclass
class CrewRoute:
    crew_id: int
    visits: list[Visit]


@dataclass
class Plan:
    routes: list[CrewRoute]
    area_recovery: dict[str, int]
    makespan: int
    objective: float
    horizon: int
    notes: list[str] = field(default_factory=list)

    def visit_orders(self) -> list[list[int]]:
        return [[v.site_id for v in r.visits] for r in self.routes]


# phases of a crew inside the simulation engine
_DECIDE, _TRAVEL, _WORK, _DONE = 0, 1, 2, 3


class _CrewState:
    __slots__ = ("loc", "phase", "dest", "arrive", "arrival_at")

    def __init__(self, loc: int):
        self.loc = loc
        self.phase = _DECIDE
        self.dest = -1
        self.arrive = -1
        self.arrival_at = -1

    def copy(self) -> "_CrewState":
        c = _CrewState.__new__(_CrewState)
        c.loc = self.loc
        c.phase = self.phase
        c.dest = self.dest
        c.arrive = self.arrive
        c.arrival_at = self.arrival_at
        return c


class _SimState:
    __slots__ = ("t", "crews", "remaining", "completed", "visits")

    def __init__(self, inst: Instance):
        self.t = 0
        self.crews = [_CrewState(c.start_site) for c in inst.crews]
        self.remaining = {f.site_id: f.required_work for f in inst.faults}
        self.completed: dict[int, int] = {}
        self.visits: list[list[tuple[int, int, int]]] = [[] for _ in inst.crews]

    def copy(self) -> "_SimState":
        s = _SimState.__new__(_SimState)
        s.t = self.t
        s.crews = [c.copy() for c in self.crews]
        s.remaining = dict(self.remaining)
        s.completed = dict(self.completed)
        s.visits = [list(v) for v in self.visits]
        return s


def _work_rates(state: _SimState, inst: Instance) -> dict[int, int]:
    """Crew-units of work applied per slot to each unrepaired fault,
    honoring the optional per-type vehicle cap (lowest crew id first)."""
    working = [
        (idx, c.loc)
        for idx, c in enumerate(state.crews)
        if c.phase == _WORK and state.remaining.get(c.loc, 0) > 0
    ]
    rates: dict[int, int] = {}
    if inst.vehicles is None:
        for _, site in working:
            rates[site] = rates.get(site, 0) + 1
        return rates
    by_site = inst.fault_by_site
    used = {ft: 0 for ft in FAULT_TYPES}
    for _, site in sorted(working):
        ft = by_site[site].fault_type
        if used[ft] < inst.vehicles.count(ft):
            used[ft] += 1
            rates[site] = rates.get(site, 0) + 1
    return rates


def _advance(state: _SimState, inst: Instance) -> list[int]:
    """Run the event clock until some crew needs a decision; returns the
    indices of deciding crews (empty when every crew is done)."""
    while True:
        deciders = [i for i, c in enumerate(state.crews) if c.phase == _DECIDE]
        if deciders:
            return deciders

        rates = _work_rates(state, inst)
        te = None
        for c in state.crews:
            if c.phase == _TRAVEL and (te is None or c.arrive < te):
                te = c.arrive
        for site, rate in rates.items():
            est = state.t + (state.remaining[site] + rate - 1) // rate
            if te is None or est < te:
                te = est
        if te is None:
            return []
        if te > 10**7:
            raise RuntimeError("simulation clock ran away; internal invariant broken")

        dt = te - state.t
        for site, rate in rates.items():
            state.remaining[site] -= rate * dt
        state.t = te

        for site in sorted(s for s, r in state.remaining.items() if r <= 0 and s not in state.completed):
            state.completed[site] = te
            for idx, c in enumerate(state.crews):
                if c.phase == _WORK and c.loc == site:
                    state.visits[idx].append((site, c.arrival_at, te))
                    c.phase = _DECIDE

        for idx, c in enumerate(state.crews):
            if c.phase == _TRAVEL and c.arrive == te:
                c.loc = c.dest
                if state.remaining.get(c.dest, 0) <= 0:
                    state.visits[idx].append((c.dest, te, te))  # pass-through
                    c.phase = _DECIDE
                else:
                    c.phase = _WORK
                    c.arrival_at = te


def _apply_decision(state: _SimState, inst: Instance, idx: int, target: int | None) -> None:
    c = state.crews[idx]
    if target is None:
        c.phase = _DONE
        return
    leg = inst.matrix.entries[c.loc][target]
    if leg >= inst.matrix.sentinel:
        raise InfeasiblePlanError(
            f"crew {inst.crews[idx].crew_id}: leg {c.loc}->{target} carries the sentinel cost"
        )
    c.phase = _TRAVEL
    c.dest = target
    c.arrive = state.t + leg


def _run_policy(inst: Instance, policy) -> tuple[_SimState, list[str]]:
    state = _SimState(inst)
    notes: list[str] = []
    while True:
        deciders = _advance(state, inst)
        if not deciders:
            break
        for idx in deciders:
            _apply_decision(state, inst, idx, policy(state, idx, notes))
    return state, notes


def _finalize(state: _SimState, inst: Instance, notes: list[str]) -> Plan:
    uncovered = sorted(s for s, r in state.remaining.items() if r > 0)
    if uncovered:
        raise InfeasiblePlanError(f"faults never repaired: {uncovered}")
    area_recovery: dict[str, int] = {}
    for a in inst.areas:
        area_recovery[a.area_id] = max(
            (state.completed[fid] for fid in a.fault_ids), default=0
        )
    makespan = max(area_recovery.values(), default=0)
    objective = float(
        sum(
            a.capacity_kw * max(0, inst.horizon - area_recovery[a.area_id])
            for a in inst.areas
        )
    )
    routes = [
        CrewRoute(inst.crews[idx].crew_id, [Visit(*v) for v in state.visits[idx]])
        for idx in range(len(inst.crews))
    ]
    return Plan(routes, area_recovery, makespan, objective, inst.horizon, notes)


def _validate_routes(routes: list[list[int]], inst: Instance) -> None:
    if len(routes) != len(inst.crews):
        raise InfeasiblePlanError(
            f"expected {len(inst.crews)} routes, got {len(routes)}"
        )
    fault_sites = {f.site_id for f in inst.faults}
    m = inst.matrix
    for crew, route in zip(inst.crews, routes):
        loc = crew.start_site
        for site in route:
            if site not in fault_sites:
                raise InfeasiblePlanError(
                    f"crew {crew.crew_id}: site {site} is not a fault point"
                )
            if m.entries[loc][site] >= m.sentinel:
                raise InfeasiblePlanError(
                    f"crew {crew.crew_id}: leg {loc}->{site} carries the sentinel cost"
                )
            loc = site
        if inst.must_return and route and m.entries[loc][crew.end_site] >= m.sentinel:
            raise InfeasiblePlanError(
                f"crew {crew.crew_id}: return leg {loc}->{crew.end_site} carries the sentinel cost"
            )
    visited = {s for route in routes for s in route}
    missing = sorted(fault_sites - visited)
    if missing:
        raise InfeasiblePlanError(f"faults not covered by any route: {missing}")


def evaluate(plan_routes: list[list[int]], instance: Instance) -> Plan:
    """Deterministically simulate fixed per-crew visit orders."""
    _validate_routes(plan_routes, instance)
    queues = [deque(r) for r in plan_routes]

    def policy(state: _SimState, idx: int, notes: list[str]) -> int | None:
        return queues[idx].popleft() if queues[idx] else None

    state, notes = _run_policy(instance, policy)
    return _finalize(state, instance, notes)


def solve_greedy(instance: Instance) -> Plan:
    """Dispatch-on-discovery baseline: every idle crew claims the unclaimed
    fault with the best capacity per (travel + work) ratio; claims are
    exclusive, so crews never co-work."""
    _check_reachable(instance)
    m = instance.matrix
    area_cap = {a.area_id: a.capacity_kw for a in instance.areas}
    by_site = instance.fault_by_site
    claimed: set[int] = set()

    def policy(state: _SimState, idx: int, notes: list[str]) -> int | None:
        best_key = None
        best_site = None
        for f in instance.faults:
            site = f.site_id
            if site in claimed or state.remaining.get(site, 0) <= 0:
                continue
            leg = m.entries[state.crews[idx].loc][site]
            if leg >= m.sentinel:
                continue
            ratio = area_cap[f.area_id] / (leg + state.remaining[site])
            key = (-ratio, site)
            if best_key is None or key < best_key:
                best_key, best_site = key, site
        if best_site is not None:
            claimed.add(best_site)
        return best_site

    state, notes = _run_policy(instance, policy)
    return _finalize(state, instance, notes)


def replay(
    plan_routes: list[list[int]],
    actual_matrix: CostMatrix,
    instance: Instance,
) -> Plan:
    """Re-run planned visit orders against the true travel costs.

    Crews discover costs when traversing. A planned leg that turns out to
    carry the sentinel triggers the detour policy: the crew re-targets its
    nearest remaining assigned site; sites it cannot reach at all move to a
    shared pool that idle crews drain nearest-first.
    """
    if actual_matrix.size != instance.matrix.size:
        raise ValueError(
            f"actual matrix size {actual_matrix.size} != planning size {instance.matrix.size}"
        )
    _validate_routes(plan_routes, instance)
    inst = Instance(
        matrix=actual_matrix,
        faults=instance.faults,
        areas=instance.areas,
        crews=instance.crews,
        horizon=instance.horizon,
        vehicles=instance.vehicles,
        must_return=False,
    )
    m = actual_matrix
    queues = [deque(r) for r in plan_routes]
    stranded: list[int] = []

    def policy(state: _SimState, idx: int, notes: list[str]) -> int | None:
        cid = inst.crews[idx].crew_id
        loc = state.crews[idx].loc
        q = queues[idx]
        while q:
            head = q[0]
            if m.entries[loc][head] < m.sentinel:
                q.popleft()
                return head
            reachable = sorted(
                (m.entries[loc][s], s) for s in q if m.entries[loc][s] < m.sentinel
            )
            if reachable:
                cost, site = reachable[0]
                q.remove(site)
                notes.append(
                    f"crew {cid}: leg {loc}->{head} impassable; detoured to nearest "
                    f"remaining site {site} (cost {cost})"
                )
                return site
            for site in q:
                notes.append(
                    f"crew {cid}: site {site} unreachable from {loc}; moved to shared pool"
                )
                stranded.append(site)
            q.clear()
        pool = sorted(
            (m.entries[loc][s], s)
            for s in stranded
            if state.remaining.get(s, 0) > 0 and m.entries[loc][s] < m.sentinel
        )
        if pool:
            cost, site = pool[0]
            stranded.remove(site)
            notes.append(f"crew {cid}: picked up stranded site {site} (cost {cost})")
            return site
        return None

    state, notes = _run_policy(inst, policy)
    return _finalize(state, inst, notes)


def _route_key(plan: Plan) -> tuple:
    return tuple(tuple(v.site_id for v in r.visits) for r in plan.routes)


def _better(candidate: Plan, incumbent: Plan | None) -> bool:
    if incumbent is None:
        return True
    if candidate.objective != incumbent.objective:
        return candidate.objective > incumbent.objective
    if candidate.makespan != incumbent.makespan:
        return candidate.makespan < incumbent.makespan
    return _route_key(candidate) < _route_key(incumbent)


def _reachable_sites(matrix: CostMatrix, origins: list[int]) -> set[int]:
    seen = set(origins)
    frontier = list(origins)
    while frontier:
        u = frontier.pop()
        for v in range(matrix.size):
            if v not in seen and matrix.entries[u][v] < matrix.sentinel:
                seen.add(v)
                frontier.append(v)
    return seen


def _check_reachable(inst: Instance) -> None:
    reachable = _reachable_sites(inst.matrix, [c.start_site for c in inst.crews])
    unreachable = sorted(f.site_id for f in inst.faults if f.site_id not in reachable)
    if unreachable:
        raise InfeasibleInstanceError(
            f"faults unreachable from every crew start: {unreachable}"
        )


def brute_force(instance: Instance) -> Plan:
    """Exhaustive oracle: every assignment of ordered fault subsets to
    crews, scored through evaluate. Hard-limited to tiny instances."""
    if (
        len(instance.crews) > ORACLE_MAX_CREWS
        or len(instance.faults) > ORACLE_MAX_FAULTS
        or instance.horizon > ORACLE_MAX_HORIZON
    ):
        raise EnvelopeExceededError(
            f"brute_force accepts <= {ORACLE_MAX_CREWS} crews, "
            f"<= {ORACLE_MAX_FAULTS} faults, horizon <= {ORACLE_MAX_HORIZON}"
        )
    _check_reachable(instance)
    m = instance.matrix
    fault_sites = sorted(f.site_id for f in instance.faults)

    def routes_from(start: int, end: int) -> list[tuple[int, ...]]:
        found: list[tuple[int, ...]] = []

        def extend(prefix: tuple[int, ...], loc: int) -> None:
            if not instance.must_return or not prefix or m.entries[loc][end] < m.sentinel:
                found.append(prefix)
            for site in fault_sites:
                if site in prefix:
                    continue
                if m.entries[loc][site] >= m.sentinel:
                    continue
                extend(prefix + (site,), site)

        extend((), start)
        return found

    per_crew = [routes_from(c.start_site, c.end_site) for c in instance.crews]
    need = set(fault_sites)
    best: Plan | None = None

    def product(idx: int, chosen: list[tuple[int, ...]], covered: set[int]) -> None:
        nonlocal best
        if idx == len(per_crew):
            if covered != need:
                return
            plan = evaluate([list(r) for r in chosen], instance)
            if _better(plan, best):
                best = plan
            return
        for route in per_crew[idx]:
            chosen.append(route)
            product(idx + 1, chosen, covered | set(route))
            chosen.pop()

    product(0, [], set())
    if best is None:
        raise InfeasibleInstanceError("no feasible assignment covers every fault")
    return best


class _ExactSearch:
    def __init__(self, inst: Instance):
        self.inst = inst
        self.m = inst.matrix
        self.n = inst.matrix.size
        self.sent = inst.matrix.sentinel
        self.fault_sites = sorted(f.site_id for f in inst.faults)
        self.area_of = {f.site_id: f.area_id for f in inst.faults}
        self.cap = {a.area_id: a.capacity_kw for a in inst.areas}
        self.crew_count = len(inst.crews)
        self.closure = self._metric_closure()
        self.improving = self._improving_table()
        self.any_improving = any(any(row) for row in self.improving)
        self.group_of = self._symmetry_groups()
        self.best: Plan | None = None
        self.ratio = {
            f.site_id: self.cap[f.area_id] for f in inst.faults
        }

    def _metric_closure(self) -> list[list[float]]:
        inf = math.inf
        d = [
            [inf if v >= self.sent else float(v) for v in row]
            for row in self.m.entries
        ]
        for i in range(self.n):
            d[i][i] = 0.0
        for k in range(self.n):
            dk = d[k]
            for i in range(self.n):
                dik = d[i][k]
                if dik == inf:
                    continue
                di = d[i]
                for j in range(self.n):
                    nd = dik + dk[j]
                    if nd < di[j]:
                        di[j] = nd
        return d

    def _improving_table(self) -> list[list[bool]]:
        # improving[x][w]: an already-repaired fault w is worth visiting
        # from x because some site is cheaper via w than directly
        ends = {c.end_site for c in self.inst.crews} if self.inst.must_return else set()
        targets = set(self.fault_sites) | ends
        e = self.m.entries
        table = [[False] * self.n for _ in range(self.n)]
        for x in range(self.n):
            for w in self.fault_sites:
                if w == x or e[x][w] >= self.sent:
                    continue
                for s in targets:
                    if s == w or s == x:
                        continue
                    via = e[x][w] + e[w][s]
                    direct = e[x][s] if e[x][s] < self.sent else math.inf
                    if e[w][s] < self.sent and via < direct:
                        table[x][w] = True
                        break
        return table

    def _symmetry_groups(self) -> list[tuple[int, int]]:
        return [(c.start_site, c.end_site) for c in self.inst.crews]

    def run(self) -> Plan:
        try:
            seed = solve_greedy(self.inst)
        except (InfeasiblePlanError, InfeasibleInstanceError):
            seed = None
        self.best = seed
        state = _SimState(self.inst)
        first_targets: list[int | None] = [None] * self.crew_count
        self._search(state, first_targets)
        if self.best is None:
            raise InfeasibleInstanceError("no feasible plan found")
        return self.best

    def _choices(self, state: _SimState, idx: int, first_targets) -> list[int | None]:
        loc = state.crews[idx].loc
        e = self.m.entries
        floor_target = -1
        if first_targets[idx] is None:
            mine = self.group_of[idx]
            for j in range(idx):
                if self.group_of[j] == mine and first_targets[j] is not None:
                    floor_target = max(floor_target, first_targets[j])

        unrepaired = []
        for s in self.fault_sites:
            if state.remaining.get(s, 0) > 0 and e[loc][s] < self.sent and s >= floor_target:
                unrepaired.append(s)
        unrepaired.sort(
            key=lambda s: (-(self.ratio[s] / (e[loc][s] + state.remaining[s])), s)
        )
        waypoints = []
        if self.any_improving and any(r > 0 for r in state.remaining.values()):
            visited = {v[0] for v in state.visits[idx]}
            for s in self.fault_sites:
                if (
                    state.remaining.get(s, 0) <= 0
                    and s not in visited
                    and s >= floor_target
                    and e[loc][s] < self.sent
                    and self.improving[loc][s]
                ):
                    waypoints.append(s)
        if not unrepaired and not waypoints:
            return [None]
        return unrepaired + waypoints

    def _bound(self, state: _SimState) -> float:
        inst = self.inst
        h = inst.horizon
        active = [
            (c.arrive if c.phase == _TRAVEL else state.t, c.dest if c.phase == _TRAVEL else c.loc)
            for c in state.crews
            if c.phase != _DONE
        ]
        has_work = any(r > 0 for r in state.remaining.values())
        if has_work and not active:
            return -math.inf  # dead branch: work left, every crew retired
        total = 0.0
        for a in inst.areas:
            r_lb = 0
            for fid in a.fault_ids:
                rem = state.remaining.get(fid, 0)
                if rem <= 0:
                    r_lb = max(r_lb, state.completed.get(fid, 0))
                    continue
                earliest = math.inf
                for avail, loc in active:
                    d = self.closure[loc][fid]
                    if avail + d < earliest:
                        earliest = avail + d
                if earliest is math.inf:
                    return -math.inf
                est = int(earliest) + (rem + self.crew_count - 1) // self.crew_count
                r_lb = max(r_lb, est)
            total += a.capacity_kw * max(0, h - r_lb)
        return total

    def _search(self, state: _SimState, first_targets) -> None:
        deciders = _advance(state, self.inst)
        if not deciders:
            if any(r > 0 for r in state.remaining.values()):
                return
            plan = _finalize(state, self.inst, [])
            if _better(plan, self.best):
                self.best = plan
            return
        if self.best is not None and self._bound(state) < self.best.objective:
            return
        idx = deciders[0]
        for target in self._choices(state, idx, first_targets):
            child = state.copy()
            child_first = list(first_targets)
            if target is not None and child_first[idx] is None:
                child_first[idx] = target
            _apply_decision(child, self.inst, idx, target)
            self._search(child, child_first)


def solve_exact(instance: Instance) -> Plan:
    """Maximum-objective plan, exact within the declared scale envelope.

    Branch-and-bound over crew decision sequences with an admissible bound
    from metric-closure travel estimates. Deterministic: ties broken by
    earlier makespan, then lexicographically smallest route encoding.
    """
    if (
        len(instance.crews) > EXACT_MAX_CREWS
        or len(instance.faults) > EXACT_MAX_FAULTS
        or instance.horizon > EXACT_MAX_HORIZON
    ):
        raise EnvelopeExceededError(
            f"solve_exact accepts <= {EXACT_MAX_CREWS} crews, <= {EXACT_MAX_FAULTS} "
            f"faults, horizon <= {EXACT_MAX_HORIZON}; use solve_greedy beyond that"
        )
    _check_reachable(instance)
    return _ExactSearch(instance).run()


def load_instance(path: str | Path, matrix: CostMatrix | None = None) -> Instance:
    """Instance JSON; ``matrix_file`` is resolved relative to the file."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if matrix is None:
        ref = data.get("matrix_file")
        if not ref:
            raise ValueError(f"{path}: no matrix_file and no matrix override given")
        matrix = load_matrix((path.parent / ref).resolve())
    vehicles = None
    if data.get("vehicles"):
        vehicles = VehiclePool(int(data["vehicles"]["pole"]), int(data["vehicles"]["wire"]))
    return Instance(
        matrix=matrix,
        faults=[
            FaultPoint(int(f["site_id"]), f["fault_type"], str(f["area_id"]), int(f["required_work"]))
            for f in data["faults"]
        ],
        areas=[
            Area(str(a["area_id"]), float(a["capacity_kw"]), tuple(int(x) for x in a["fault_ids"]))
            for a in data["areas"]
        ],
        crews=[
            Crew(int(c["crew_id"]), int(c["start_site"]), int(c["end_site"]))
            for c in data["crews"]
        ],
        horizon=int(data.get("horizon", 60)),
        vehicles=vehicles,
        must_return=bool(data.get("must_return", False)),
    )


def plan_to_dict(plan: Plan) -> dict:
    objective = plan.objective
    return {
        "objective_kwh": int(objective) if objective == int(objective) else objective,
        "makespan_slot": plan.makespan,
        "horizon": plan.horizon,
        "area_recovery": dict(sorted(plan.area_recovery.items())),
        "routes": [
            {
                "crew_id": r.crew_id,
                "visits": [
                    {
                        "site_id": v.site_id,
                        "arrival_slot": v.arrival_slot,
                        "completion_slot": v.completion_slot,
                    }
                    for v in r.visits
                ],
            }
            for r in plan.routes
        ],
        "notes": list(plan.notes),
    }


def plan_routes_from_dict(data: dict) -> list[list[int]]:
    return [[v["site_id"] for v in r["visits"]] for r in data["routes"]]


def save_plan(plan: Plan, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(plan_to_dict(plan), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def format_report(plan: Plan) -> str:
    lines = ["Routes of crews"]
    for r in plan.routes:
        pairs = ", ".join(f"({v.site_id}, {float(v.completion_slot)})" for v in r.visits)
        lines.append(f"crew {r.crew_id} completes repairing location at time [{pairs}]")
    lines.append("")
    lines.append("Time of area recovery")
    for area_id, slot in sorted(plan.area_recovery.items()):
        lines.append(f"area {area_id} is recovered at time {slot}")
    lines.append("")
    objective = plan.objective
    printed = int(objective) if objective == int(objective) else objective
    lines.append(f"Objective value: {printed}")
    for note in plan.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"
