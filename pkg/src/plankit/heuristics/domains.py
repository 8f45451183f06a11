"""Hand-written domain-dependent heuristics for the eight bundled domains.

Each heuristic binds predicate roles through a manifest (see ``bindings``),
precomputes whatever static structure it needs (distance tables, coordinate
embeddings, object classifications) at construction time, and then scores
states with cheap per-goal arithmetic.  A goal that no available resource can
possibly serve contributes a large finite penalty rather than infinity, so
search keeps going instead of pruning states the estimate merely dislikes.

All eight return 0 on goal states.
"""

from __future__ import annotations

from math import inf

from ..errors import BindingError
from ..grounding import GroundTask, State
from .basic import Heuristic, INFINITY
from .bindings import DomainBindings, resolve_bindings
from .distances import apsp_from_links, bfs_distances

UNASSIGNED_PENALTY = 10**6


class DomainHeuristic(Heuristic):
    """Shared construction: resolve the role manifest for ``manifest_domain``."""

    manifest_domain = ""

    def __init__(self, task: GroundTask, bindings: DomainBindings | None = None):
        super().__init__(task)
        self.bindings = bindings or resolve_bindings(self.manifest_domain, task)

    # -- small lookup helpers over the atom table ------------------------

    def _pairs_of(self, predicate: str) -> dict:
        """atom index -> args tuple, for every table atom of ``predicate``."""
        return {i: self.task.atoms[i].args for i in self.task.atoms_of(predicate)}

    def _init_atoms(self, predicate: str):
        return [self.task.atoms[i] for i in self.task.init_atoms_of(predicate)]


# ---------------------------------------------------------------------------
# blocksworld


class BlocksworldStackingHeuristic(DomainHeuristic):
    """1 per misplaced goal block plus 2 per block stacked on top of it.

    A block's governing goal atom is the ``on``/``on-table`` atom that places
    the block itself (first argument).  Blocks without one are free helpers
    and never scored.
    """

    name = "bw-r1"
    manifest_domain = "blocksworld"

    def __init__(self, task: GroundTask, bindings=None):
        super().__init__(task, bindings)
        on = self.bindings["on"]
        on_table = self.bindings["on-table"]
        self._goal_of_block = {}
        for g in task.goal:
            atom = task.atoms[g]
            if atom.predicate in (on, on_table):
                self._goal_of_block[atom.args[0]] = g
        # For walking "what sits on top of X" chains in a state.
        self._on_pairs = self._pairs_of(on)
        self._n_blocks = len(
            {a for args in self._on_pairs.values() for a in args}
        ) or 1

    def evaluate(self, state: State) -> float:
        on_top_of = {}
        for i in state:
            pair = self._on_pairs.get(i)
            if pair is not None:
                on_top_of[pair[1]] = pair[0]
        total = 0
        for block, goal_atom in self._goal_of_block.items():
            if goal_atom in state:
                continue
            above = 0
            cur = block
            while cur in on_top_of and above < self._n_blocks:
                cur = on_top_of[cur]
                above += 1
            total += 1 + 2 * above
        return total


# ---------------------------------------------------------------------------
# spanner


class SpannerGreedyHeuristic(DomainHeuristic):
    """Greedy nut-to-spanner assignment over the one-way corridor.

    Nuts are scored in name order; each picks the cheapest usable spanner not
    taken by an earlier nut (carried: walk to the nut + tighten; on the
    ground: walk to the spanner, then to the nut, pick up + tighten).  A nut
    no spanner can reach costs ``UNASSIGNED_PENALTY``.
    """

    name = "spanner-r1"
    manifest_domain = "spanner"

    def __init__(self, task: GroundTask, bindings=None):
        super().__init__(task, bindings)
        b = self.bindings
        # The corridor is directed: walking back is not possible.
        self._dist = apsp_from_links(self._init_atoms(b["link"]), undirected=False)

        nuts = set()
        for pred in (b["loose"], b["tightened"]):
            for i in task.atoms_of(pred):
                nuts.add(task.atoms[i].args[0])
        spanners = {task.atoms[i].args[0] for i in task.atoms_of(b["usable"])}
        carrying_pairs = self._pairs_of(b["carrying"])
        spanners.update(args[1] for args in carrying_pairs.values())

        at_pairs = self._pairs_of(b["at"])
        agents = {args[0] for args in at_pairs.values()} - nuts - spanners
        if len(agents) != 1:
            raise BindingError(
                f"expected exactly one agent in '{task.problem_name}', found {sorted(agents)}"
            )
        self._agent = next(iter(agents))

        self._agent_at = {i: args[1] for i, args in at_pairs.items() if args[0] == self._agent}
        self._spanner_at = {
            i: args for i, args in at_pairs.items() if args[0] in spanners
        }
        self._nut_loc = {}
        for atom in self._init_atoms(b["at"]):
            if atom.args[0] in nuts:
                self._nut_loc[atom.args[0]] = atom.args[1]
        self._carried_by_agent = {
            args[1]: i for i, args in carrying_pairs.items() if args[0] == self._agent
        }
        self._usable_atom = {
            task.atoms[i].args[0]: i for i in task.atoms_of(b["usable"])
        }
        self._loose_atoms = sorted(
            ((task.atoms[i].args[0], i) for i in task.atoms_of(b["loose"]))
        )

    def evaluate(self, state: State) -> float:
        agent_loc = None
        for i, loc in self._agent_at.items():
            if i in state:
                agent_loc = loc
                break
        spanner_loc = {}
        for i, (s, loc) in self._spanner_at.items():
            if i in state:
                spanner_loc[s] = loc
        available = []
        for s, usable_idx in sorted(self._usable_atom.items()):
            if usable_idx not in state:
                continue
            carried = self._carried_by_agent.get(s)
            available.append((s, carried is not None and carried in state))

        dist = self._dist.distance
        total = 0
        for nut, loose_idx in self._loose_atoms:
            if loose_idx not in state:
                continue
            nut_loc = self._nut_loc.get(nut)
            best = None
            best_cost = inf
            for pos, (s, carried) in enumerate(available):
                if carried:
                    cost = dist(agent_loc, nut_loc) + 1
                else:
                    loc = spanner_loc.get(s)
                    if loc is None:
                        continue
                    cost = dist(agent_loc, loc) + dist(loc, nut_loc) + 2
                if cost < best_cost:
                    best_cost = cost
                    best = pos
            if best is None or best_cost == inf:
                total += UNASSIGNED_PENALTY
            else:
                total += best_cost
                available.pop(best)
        return total


# ---------------------------------------------------------------------------
# miconic


class MiconicServeHeuristic(DomainHeuristic):
    """Per unserved passenger: remaining lift travel plus board/leave steps.

    Boarded: hops from the lift to the destination, plus one leave action.
    Waiting: hops to the origin, hops origin-to-destination, plus board and
    leave.  Floor hops come from an undirected graph over the floor links.
    """

    name = "miconic-r1"
    manifest_domain = "miconic"

    def __init__(self, task: GroundTask, bindings=None):
        super().__init__(task, bindings)
        b = self.bindings
        self._dist = apsp_from_links(self._init_atoms(b["floor-link"]), undirected=True)
        self._origin = {}
        for atom in self._init_atoms(b["origin"]):
            self._origin[atom.args[0]] = atom.args[1]
        self._destination = {}
        for atom in self._init_atoms(b["destination"]):
            self._destination[atom.args[0]] = atom.args[1]
        self._lift_at = {i: task.atoms[i].args[0] for i in task.atoms_of(b["lift-at"])}
        self._boarded_atom = {
            task.atoms[i].args[0]: i for i in task.atoms_of(b["boarded"])
        }
        served = b["served"]
        self._goal_passengers = [
            (g, task.atoms[g].args[0])
            for g in sorted(task.goal)
            if task.atoms[g].predicate == served
        ]

    def evaluate(self, state: State) -> float:
        lift_floor = None
        for i, floor in self._lift_at.items():
            if i in state:
                lift_floor = floor
                break
        dist = self._dist.distance
        total = 0
        for goal_atom, passenger in self._goal_passengers:
            if goal_atom in state:
                continue
            boarded_idx = self._boarded_atom.get(passenger)
            dest = self._destination.get(passenger)
            if boarded_idx is not None and boarded_idx in state:
                total += dist(lift_floor, dest) + 1
            else:
                origin = self._origin.get(passenger)
                total += dist(lift_floor, origin) + dist(origin, dest) + 2
        return total


# ---------------------------------------------------------------------------
# sokoban


class SokobanDistanceHeuristic(DomainHeuristic):
    """Box-to-goal hop distances plus the walk to the closest unplaced box.

    Distances ignore push geometry and treat the cell graph as undirected;
    a box whose goal cell is disconnected makes the state infinite.
    """

    name = "sokoban-r1"
    manifest_domain = "sokoban"

    def __init__(self, task: GroundTask, bindings=None):
        super().__init__(task, bindings)
        b = self.bindings
        self._dist = apsp_from_links(self._init_atoms(b["cell-link"]), undirected=True)
        stone_at = b["stone-at"]
        self._goals = [
            (g,) + task.atoms[g].args
            for g in sorted(task.goal)
            if task.atoms[g].predicate == stone_at
        ]
        self._stone_at = self._pairs_of(stone_at)
        self._player_at = self._pairs_of(b["player-at"])

    def evaluate(self, state: State) -> float:
        player_cell = None
        stone_cell = {}
        for i in state:
            pair = self._player_at.get(i)
            if pair is not None:
                player_cell = pair[0]
                continue
            pair = self._stone_at.get(i)
            if pair is not None:
                stone_cell[pair[0]] = pair[1]
        dist = self._dist.distance
        total = 0
        nearest_box = inf
        misplaced = False
        for goal_atom, stone, goal_cell in self._goals:
            if goal_atom in state:
                continue
            misplaced = True
            cell = stone_cell.get(stone)
            d = dist(cell, goal_cell) if cell is not None else inf
            if d == inf:
                return INFINITY
            total += d
            walk = dist(player_cell, cell)
            if walk < nearest_box:
                nearest_box = walk
        if not misplaced:
            return 0
        if nearest_box == inf:
            return INFINITY
        return total + nearest_box


# ---------------------------------------------------------------------------
# transport


class TransportDeliveryHeuristic(DomainHeuristic):
    """Per undelivered package: remaining drive plus load/unload steps.

    In a vehicle: drive to the destination, plus one drop.  On the ground:
    cheapest vehicle drives over, then to the destination, plus pick-up and
    drop.  Vehicle capacity is ignored.
    """

    name = "transport-r1"
    manifest_domain = "transport"

    def __init__(self, task: GroundTask, bindings=None):
        super().__init__(task, bindings)
        b = self.bindings
        self._dist = apsp_from_links(self._init_atoms(b["road"]), undirected=True)
        self._vehicles = sorted(
            {task.atoms[i].args[0] for i in task.atoms_of(b["capacity"])}
        )
        at = b["at"]
        self._at_pairs = self._pairs_of(at)
        self._in_pairs = self._pairs_of(b["in"])
        self._goals = [
            (g,) + task.atoms[g].args
            for g in sorted(task.goal)
            if task.atoms[g].predicate == at
        ]

    def evaluate(self, state: State) -> float:
        vehicle_loc = {}
        thing_loc = {}
        in_vehicle = {}
        for i in state:
            pair = self._at_pairs.get(i)
            if pair is not None:
                thing_loc[pair[0]] = pair[1]
                continue
            pair = self._in_pairs.get(i)
            if pair is not None:
                in_vehicle[pair[0]] = pair[1]
        for v in self._vehicles:
            if v in thing_loc:
                vehicle_loc[v] = thing_loc[v]
        dist = self._dist.distance
        total = 0
        for goal_atom, package, dest in self._goals:
            if goal_atom in state:
                continue
            carrier = in_vehicle.get(package)
            if carrier is not None:
                total += dist(vehicle_loc.get(carrier), dest) + 1
            else:
                origin = thing_loc.get(package)
                best = inf
                for v, v_loc in vehicle_loc.items():
                    cost = dist(v_loc, origin) + dist(origin, dest) + 2
                    if cost < best:
                        best = cost
                total += best
        return total


# ---------------------------------------------------------------------------
# childsnack


class ChildsnackCountHeuristic(DomainHeuristic):
    """Count the work left: make missing sandwiches, stage trays, serve.

    2 per sandwich still to make (gluten-free demand and regular demand
    counted separately, no substitution), 1 per waiting location that has an
    unserved child but no tray, and 1 per unserved child for the serve
    itself.
    """

    name = "childsnack-r1"
    manifest_domain = "childsnack"

    def __init__(self, task: GroundTask, bindings=None):
        super().__init__(task, bindings)
        b = self.bindings
        self._allergic = {task.atoms[i].args[0] for i in task.atoms_of(b["allergic"])}
        self._waiting_at = {}
        for atom in self._init_atoms(b["waiting"]):
            self._waiting_at[atom.args[0]] = atom.args[1]
        served = b["served"]
        self._goal_children = [
            (g, task.atoms[g].args[0])
            for g in sorted(task.goal)
            if task.atoms[g].predicate == served
        ]
        self._kitchen_atom = self._pairs_of(b["sandwich-at-kitchen"])
        self._ontray_pairs = self._pairs_of(b["on-tray"])
        self._gluten_free = self._pairs_of(b["gluten-free"])
        self._tray_at = self._pairs_of(b["tray-at"])

    def evaluate(self, state: State) -> float:
        made = set()
        tray_places = set()
        gluten_free = set()
        for i in state:
            if i in self._kitchen_atom:
                made.add(self._kitchen_atom[i][0])
            elif i in self._ontray_pairs:
                made.add(self._ontray_pairs[i][0])
            elif i in self._tray_at:
                tray_places.add(self._tray_at[i][1])
            elif i in self._gluten_free:
                gluten_free.add(self._gluten_free[i][0])

        unserved_allergic = 0
        unserved_regular = 0
        uncovered_places = set()
        for goal_atom, child in self._goal_children:
            if goal_atom in state:
                continue
            if child in self._allergic:
                unserved_allergic += 1
            else:
                unserved_regular += 1
            place = self._waiting_at.get(child)
            if place is not None and place not in tray_places:
                uncovered_places.add(place)

        available_gf = len(made & gluten_free)
        available_regular = len(made - gluten_free)
        missing = max(0, unserved_allergic - available_gf) + max(
            0, unserved_regular - available_regular
        )
        return (
            2 * missing
            + len(uncovered_places)
            + unserved_allergic
            + unserved_regular
        )


# ---------------------------------------------------------------------------
# floortile


class FloortileManhattanHeuristic(DomainHeuristic):
    """Per unpainted goal tile: closest robot's Manhattan distance, +1 if
    none of the closest robots holds the right colour, +1 for the paint.

    Tile coordinates are recovered by embedding the four adjacency relations
    into the plane with a BFS, so tile names never matter.  Tiles in
    different components are mutually unreachable.
    """

    name = "floortile-r1"
    manifest_domain = "floortile"

    def __init__(self, task: GroundTask, bindings=None):
        super().__init__(task, bindings)
        b = self.bindings
        steps = {
            b["up"]: (0, 1),
            b["down"]: (0, -1),
            b["right"]: (1, 0),
            b["left"]: (-1, 0),
        }
        adjacency = {}
        tiles = set()
        for pred, (dx, dy) in steps.items():
            for atom in self._init_atoms(pred):
                a, t = atom.args[0], atom.args[1]
                tiles.update((a, t))
                # up(a, t): a sits one step (dx, dy) from t.
                adjacency.setdefault(t, []).append((a, dx, dy))
                adjacency.setdefault(a, []).append((t, -dx, -dy))
        self._coord = {}
        self._component = {}
        for comp, anchor in enumerate(sorted(tiles)):
            if anchor in self._coord:
                continue
            self._coord[anchor] = (0, 0)
            self._component[anchor] = comp
            frontier = [anchor]
            while frontier:
                cur = frontier.pop()
                x, y = self._coord[cur]
                for nxt, dx, dy in adjacency.get(cur, ()):
                    if nxt not in self._coord:
                        self._coord[nxt] = (x + dx, y + dy)
                        self._component[nxt] = comp
                        frontier.append(nxt)

        painted = b["painted"]
        self._goals = [
            (g,) + task.atoms[g].args
            for g in sorted(task.goal)
            if task.atoms[g].predicate == painted
        ]
        self._robot_at = self._pairs_of(b["robot-at"])
        self._robot_has = self._pairs_of(b["robot-has"])

    def evaluate(self, state: State) -> float:
        robot_tile = {}
        holding = {}
        for i in state:
            pair = self._robot_at.get(i)
            if pair is not None:
                robot_tile[pair[0]] = pair[1]
                continue
            pair = self._robot_has.get(i)
            if pair is not None:
                holding[pair[0]] = pair[1]
        total = 0
        for goal_atom, tile, color in self._goals:
            if goal_atom in state:
                continue
            tx, ty = self._coord.get(tile, (None, None))
            comp = self._component.get(tile)
            best = inf
            closest = []
            for robot, rt in robot_tile.items():
                if self._component.get(rt) != comp or tx is None:
                    continue
                rx, ry = self._coord[rt]
                d = abs(rx - tx) + abs(ry - ty)
                if d < best:
                    best = d
                    closest = [robot]
                elif d == best:
                    closest.append(robot)
            if best == inf:
                return INFINITY
            color_ok = any(holding.get(r) == color for r in closest)
            total += best + (0 if color_ok else 1) + 1
        return total


# ---------------------------------------------------------------------------
# rovers


class RoversMissionHeuristic(DomainHeuristic):
    """Per outstanding data goal: finish collecting, then relay to the lander.

    Data already collected costs the holder's drive to a lander-visible
    waypoint plus one transmit.  Otherwise an equipped rover drives to the
    acquisition waypoint, acquires (+1, plus +1 camera calibration for
    images), drives to a lander-visible waypoint, and transmits (+1).
    Traversal graphs are per-rover and directed; BFS runs on demand and is
    memoised for the duration of one evaluation.  Goals no equipped rover
    can serve cost ``UNASSIGNED_PENALTY``.
    """

    name = "rovers-r1"
    manifest_domain = "rovers"

    def __init__(self, task: GroundTask, bindings=None):
        super().__init__(task, bindings)
        b = self.bindings
        self._adjacency = {}
        for atom in self._init_atoms(b["traverse"]):
            rover, src, dst = atom.args
            self._adjacency.setdefault(rover, {}).setdefault(src, set()).add(dst)

        lander_wps = {atom.args[1] for atom in self._init_atoms(b["lander-at"])}
        self._comm_wps = sorted(
            {
                atom.args[0]
                for atom in self._init_atoms(b["visible"])
                if atom.args[1] in lander_wps
            }
        )
        self._visible_from = {}
        for atom in self._init_atoms(b["visible-from"]):
            self._visible_from.setdefault(atom.args[0], []).append(atom.args[1])

        self._equipped_soil = {
            task.atoms[i].args[0] for i in task.atoms_of(b["equipped-soil"])
        }
        self._equipped_rock = {
            task.atoms[i].args[0] for i in task.atoms_of(b["equipped-rock"])
        }
        imaging = {task.atoms[i].args[0] for i in task.atoms_of(b["equipped-imaging"])}
        camera_modes = {}
        for atom in self._init_atoms(b["supports"]):
            camera_modes.setdefault(atom.args[0], set()).add(atom.args[1])
        self._imaging_rovers_for_mode = {}
        for atom in self._init_atoms(b["on-board"]):
            camera, rover = atom.args
            if rover not in imaging:
                continue
            for mode in camera_modes.get(camera, ()):
                self._imaging_rovers_for_mode.setdefault(mode, set()).add(rover)

        self._rover_at = self._pairs_of(b["rover-at"])
        self._have_soil = self._pairs_of(b["have-soil"])
        self._have_rock = self._pairs_of(b["have-rock"])
        self._have_image = self._pairs_of(b["have-image"])
        self._soil_sample = {
            task.atoms[i].args[0]: i for i in task.atoms_of(b["soil-sample"])
        }
        self._rock_sample = {
            task.atoms[i].args[0]: i for i in task.atoms_of(b["rock-sample"])
        }

        soil_done = b["soil-done"]
        rock_done = b["rock-done"]
        image_done = b["image-done"]
        self._goals = []
        for g in sorted(task.goal):
            atom = task.atoms[g]
            if atom.predicate == soil_done:
                self._goals.append(("soil", g, atom.args))
            elif atom.predicate == rock_done:
                self._goals.append(("rock", g, atom.args))
            elif atom.predicate == image_done:
                self._goals.append(("image", g, atom.args))

    def evaluate(self, state: State) -> float:
        positions = {}
        have_soil = {}
        have_rock = {}
        have_image = {}
        for i in state:
            pair = self._rover_at.get(i)
            if pair is not None:
                positions[pair[0]] = pair[1]
                continue
            pair = self._have_soil.get(i)
            if pair is not None:
                have_soil.setdefault(pair[1], []).append(pair[0])
                continue
            pair = self._have_rock.get(i)
            if pair is not None:
                have_rock.setdefault(pair[1], []).append(pair[0])
                continue
            triple = self._have_image.get(i)
            if triple is not None:
                have_image.setdefault((triple[1], triple[2]), []).append(triple[0])

        memo = {}

        def dist(rover, src, dst):
            if src == dst:
                return 0
            key = (rover, src)
            table = memo.get(key)
            if table is None:
                table = bfs_distances(self._adjacency.get(rover, {}), src)
                memo[key] = table
            return table.get(dst, inf)

        def comm_cost(rover, src):
            return min(
                (dist(rover, src, c) for c in self._comm_wps), default=inf
            )

        def relay_cost(holders):
            return min(
                (comm_cost(r, positions.get(r)) + 1 for r in holders), default=inf
            )

        def collect_cost(rovers, acq_wp, extra):
            best = inf
            for r in sorted(rovers):
                pos = positions.get(r)
                cost = dist(r, pos, acq_wp) + 1 + extra + comm_cost(r, acq_wp) + 1
                if cost < best:
                    best = cost
            return best

        total = 0
        for kind, goal_atom, args in self._goals:
            if goal_atom in state:
                continue
            if kind == "soil":
                wp = args[0]
                holders = have_soil.get(wp, [])
                if holders:
                    cost = relay_cost(holders)
                elif self._soil_sample.get(wp) in state and self._equipped_soil:
                    cost = collect_cost(self._equipped_soil, wp, 0)
                else:
                    cost = UNASSIGNED_PENALTY
            elif kind == "rock":
                wp = args[0]
                holders = have_rock.get(wp, [])
                if holders:
                    cost = relay_cost(holders)
                elif self._rock_sample.get(wp) in state and self._equipped_rock:
                    cost = collect_cost(self._equipped_rock, wp, 0)
                else:
                    cost = UNASSIGNED_PENALTY
            else:
                objective, mode = args
                holders = have_image.get((objective, mode), [])
                if holders:
                    cost = relay_cost(holders)
                else:
                    rovers = self._imaging_rovers_for_mode.get(mode, set())
                    spots = self._visible_from.get(objective, [])
                    if rovers and spots:
                        cost = min(
                            collect_cost(rovers, wp, 1) for wp in sorted(spots)
                        )
                    else:
                        cost = UNASSIGNED_PENALTY
            if cost == inf:
                cost = UNASSIGNED_PENALTY
            total += cost
        return total
