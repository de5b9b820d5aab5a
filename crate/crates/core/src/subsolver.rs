//! Exact solver for small response subproblems with fixed boundary values.
//! Used for the coarsest level and for localized refinement. Exhaustive
//! enumeration up to 20 free variables, best-first branch-and-bound above.

use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::instance::ResponseInstance;

/// Leaf feasibility tolerance. Slightly tighter than the instance-level
/// verdict tolerance so that spliced sub-solutions re-verify cleanly after
/// the product regrouping between reduced and global constraint forms.
pub const LEAF_TOL: f64 = 5e-13;

/// Free-variable count at or below which assignments are enumerated
/// exhaustively.
pub const ENUM_LIMIT: usize = 20;

const BOUND_SLACK: f64 = 1e-9;

/// Fixes a subset of nodes at given values; the rest are free.
#[derive(Debug, Clone)]
pub struct BoundaryCondition {
    /// `assignment[i] = Some(value)` for fixed nodes, `None` for free ones.
    pub assignment: Vec<Option<bool>>,
}

impl BoundaryCondition {
    /// Everything free (whole-instance solve).
    pub fn all_free(n: usize) -> Self {
        Self { assignment: vec![None; n] }
    }

    /// Fix every node at `x` except those in `free`.
    pub fn fix_except(x: &[bool], free: &[usize]) -> Self {
        let mut assignment: Vec<Option<bool>> = x.iter().map(|&v| Some(v)).collect();
        for &i in free {
            assignment[i] = None;
        }
        Self { assignment }
    }

    pub fn free_ids(&self) -> Vec<usize> {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_none())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Constraint of a fixed open node adjacent to free nodes: opening its free
/// neighbors tightens it, so it constrains the subproblem.
#[derive(Debug, Clone)]
struct BoundaryConstraint {
    /// Product of (1 - p phi x) over the node's fixed neighbors.
    k: f64,
    b: f64,
    /// (free local id, p * phi of that free neighbor).
    terms: Vec<(usize, f64)>,
}

/// A response subproblem over the free nodes of a boundary condition, with
/// the fixed part folded into linear coefficients, constraint scales, and a
/// constant objective offset.
#[derive(Debug, Clone)]
pub struct ReducedInstance {
    /// Local index -> global node id, ascending.
    free_ids: Vec<usize>,
    /// Free-free edges in local indices, in fine edge order.
    edges: Vec<(usize, usize, f64)>,
    /// Linear coefficient per free node: a_i plus weights to fixed open
    /// neighbors.
    lin: Vec<f64>,
    /// Constraint scale per free node: product of (1 - p phi x) over fixed
    /// neighbors.
    k: Vec<f64>,
    b: Vec<f64>,
    /// Per free node: (free local neighbor, p * phi of neighbor), in
    /// adjacency order.
    infl: Vec<Vec<(usize, f64)>>,
    boundary: Vec<BoundaryConstraint>,
    /// Objective contribution of the fixed part.
    offset: f64,
}

/// Reduce an instance against a boundary condition. Fails with
/// [`Error::BoundaryInfeasible`] when some fixed open node's constraint is
/// violated by the fixed values alone (no free assignment can satisfy it).
pub fn reduce_with_boundary(
    inst: &ResponseInstance,
    bc: &BoundaryCondition,
) -> Result<ReducedInstance> {
    let n = inst.n();
    if bc.assignment.len() != n {
        return Err(Error::invalid("boundary condition length mismatch"));
    }
    let g = inst.graph();
    let free_ids = bc.free_ids();
    let mut local = vec![usize::MAX; n];
    for (l, &gid) in free_ids.iter().enumerate() {
        local[gid] = l;
    }
    let is_free = |i: usize| bc.assignment[i].is_none();
    let fixed_open = |i: usize| bc.assignment[i] == Some(true);

    let mut edges = Vec::new();
    let mut offset = 0.0;
    for e in g.edges() {
        match (is_free(e.u), is_free(e.v)) {
            (true, true) => edges.push((local[e.u], local[e.v], e.w)),
            (false, false) => {
                if fixed_open(e.u) && fixed_open(e.v) {
                    offset += e.w;
                }
            }
            _ => {} // free-fixed handled through lin below
        }
    }
    for i in 0..n {
        if fixed_open(i) {
            offset += inst.a()[i];
        }
    }

    let mut lin = Vec::with_capacity(free_ids.len());
    let mut k = Vec::with_capacity(free_ids.len());
    let mut b = Vec::with_capacity(free_ids.len());
    let mut infl = Vec::with_capacity(free_ids.len());
    for &i in &free_ids {
        let mut li = inst.a()[i];
        let mut ki = 1.0;
        let mut fi = Vec::new();
        for inc in g.adj(i) {
            let j = inc.neighbor;
            if is_free(j) {
                fi.push((local[j], inst.p()[inc.edge] * inst.phi()[j]));
            } else if fixed_open(j) {
                li += g.weight(inc.edge);
                ki *= 1.0 - inst.p()[inc.edge] * inst.phi()[j];
            }
        }
        lin.push(li);
        k.push(ki);
        b.push(inst.b()[i]);
        infl.push(fi);
    }

    let mut boundary = Vec::new();
    for t in 0..n {
        if !fixed_open(t) {
            continue;
        }
        let mut kt = 1.0;
        let mut terms = Vec::new();
        for inc in g.adj(t) {
            let j = inc.neighbor;
            if is_free(j) {
                terms.push((local[j], inst.p()[inc.edge] * inst.phi()[j]));
            } else if fixed_open(j) {
                kt *= 1.0 - inst.p()[inc.edge] * inst.phi()[j];
            }
        }
        // Minimal exposure over free assignments is with all free neighbors
        // closed; if even that violates, no free assignment can help.
        if 1.0 - kt - inst.b()[t] > LEAF_TOL {
            return Err(Error::BoundaryInfeasible { node: t });
        }
        if !terms.is_empty() {
            boundary.push(BoundaryConstraint { k: kt, b: inst.b()[t], terms });
        }
    }

    Ok(ReducedInstance { free_ids, edges, lin, k, b, infl, boundary, offset })
}

impl ReducedInstance {
    /// Whole-instance subproblem: no fixed nodes.
    pub fn from_instance(inst: &ResponseInstance) -> Result<Self> {
        reduce_with_boundary(inst, &BoundaryCondition::all_free(inst.n()))
    }

    pub fn num_free(&self) -> usize {
        self.free_ids.len()
    }

    pub fn free_ids(&self) -> &[usize] {
        &self.free_ids
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    /// Objective of a free assignment (without the offset). Canonical
    /// summation order: edges, then linear terms.
    pub fn evaluate(&self, x: &[bool]) -> f64 {
        let mut acc = 0.0;
        for &(u, v, w) in &self.edges {
            if x[u] && x[v] {
                acc += w;
            }
        }
        for (i, &l) in self.lin.iter().enumerate() {
            if x[i] {
                acc += l;
            }
        }
        acc
    }

    /// Exposure left-hand side of free node `i` under `x`.
    fn lhs(&self, x: &[bool], i: usize) -> f64 {
        let xi = if x[i] { 1.0 } else { 0.0 };
        let mut prod = self.k[i];
        for &(j, c) in &self.infl[i] {
            if x[j] {
                prod *= 1.0 - c;
            }
        }
        xi - prod
    }

    fn boundary_lhs(&self, x: &[bool], bcn: &BoundaryConstraint) -> f64 {
        let mut prod = bcn.k;
        for &(j, c) in &bcn.terms {
            if x[j] {
                prod *= 1.0 - c;
            }
        }
        1.0 - prod
    }

    /// Full feasibility of a free assignment, including the fixed boundary
    /// nodes' constraints.
    pub fn check_feasible(&self, x: &[bool]) -> bool {
        for i in 0..self.num_free() {
            if self.lhs(x, i) - self.b[i] > LEAF_TOL {
                return false;
            }
        }
        self.boundary
            .iter()
            .all(|bcn| self.boundary_lhs(x, bcn) - bcn.b <= LEAF_TOL)
    }
}

/// Deterministic work budget for an exact solve. `max_steps` counts
/// enumerated assignments or branch-and-bound expansions and is scheduler
/// independent; `time_limit` is a wall-clock safety net.
#[derive(Debug, Clone, Copy, Default)]
pub struct SolveBudget {
    pub max_steps: Option<u64>,
    pub time_limit: Option<Duration>,
}

impl SolveBudget {
    pub const UNLIMITED: SolveBudget = SolveBudget { max_steps: None, time_limit: None };

    pub fn steps(max_steps: u64) -> Self {
        SolveBudget { max_steps: Some(max_steps), time_limit: None }
    }
}

/// Result of an exact solve over a reduced instance's free nodes.
#[derive(Debug, Clone)]
pub struct ExactSolution {
    /// Free assignment in local index order.
    pub x: Vec<bool>,
    /// Objective over free nodes (add `offset()` for the global value).
    pub objective: f64,
    /// Whether the search space was exhausted.
    pub optimal: bool,
}

/// Solve a reduced instance to global optimality (budget permitting).
/// Equal-objective optima resolve to the lexicographically smallest
/// assignment. `warm_start` seeds the incumbent so a budget-limited solve
/// never returns anything worse than the caller's current assignment.
pub fn solve_exact(
    red: &ReducedInstance,
    limit: usize,
    budget: &SolveBudget,
    warm_start: Option<&[bool]>,
) -> Result<ExactSolution> {
    let f = red.num_free();
    if f > limit {
        return Err(Error::SubproblemTooLarge { size: f, limit });
    }
    if f == 0 {
        return Ok(ExactSolution { x: Vec::new(), objective: 0.0, optimal: true });
    }
    if f <= ENUM_LIMIT {
        Ok(enumerate(red, budget))
    } else {
        branch_and_bound(red, budget, warm_start)
    }
}

fn deadline_of(budget: &SolveBudget) -> Option<Instant> {
    budget.time_limit.map(|d| Instant::now() + d)
}

fn enumerate(red: &ReducedInstance, budget: &SolveBudget) -> ExactSolution {
    let f = red.num_free();
    let deadline = deadline_of(budget);
    let max_steps = budget.max_steps.unwrap_or(u64::MAX);
    let total: u64 = 1 << f;
    let mut best_obj = f64::NEG_INFINITY;
    let mut best_x = vec![false; f];
    let mut xbuf = vec![false; f];
    let mut optimal = true;

    for mask in 0..total {
        // ascending mask order with x[0] as the most significant bit is
        // lexicographic order, so the first strict improvement is the
        // lexicographically smallest optimum.
        for (i, slot) in xbuf.iter_mut().enumerate() {
            *slot = (mask >> (f - 1 - i)) & 1 == 1;
        }
        let obj = red.evaluate(&xbuf);
        if obj > best_obj && red.check_feasible(&xbuf) {
            best_obj = obj;
            best_x.copy_from_slice(&xbuf);
        }
        let done = mask + 1;
        if done < total
            && (done >= max_steps
                || (done % 16384 == 0 && deadline.is_some_and(|d| Instant::now() >= d)))
        {
            optimal = false;
            break;
        }
    }
    // the all-closed assignment (mask 0) is always feasible, so an incumbent
    // exists even under a truncated scan
    ExactSolution { x: best_x, objective: best_obj, optimal }
}

struct HeapEntry {
    bound: f64,
    seq: u64,
    depth: usize,
    /// bit t = value chosen for branch order position t
    path: u128,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound && self.seq == other.seq
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // max-heap on bound; FIFO among equal bounds for determinism
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

const UNDECIDED: i8 = -1;

fn branch_and_bound(
    red: &ReducedInstance,
    budget: &SolveBudget,
    warm_start: Option<&[bool]>,
) -> Result<ExactSolution> {
    let f = red.num_free();
    if f > 128 {
        return Err(Error::invalid(format!(
            "branch-and-bound supports at most 128 free nodes, got {f}"
        )));
    }
    let deadline = deadline_of(budget);

    // static branch order: largest incident free-free weight first
    let mut incident = vec![0.0; f];
    for &(u, v, w) in &red.edges {
        incident[u] += w;
        incident[v] += w;
    }
    let mut order: Vec<usize> = (0..f).collect();
    order.sort_by(|&a, &b| incident[b].total_cmp(&incident[a]).then(a.cmp(&b)));

    // boundary constraints indexed by the free nodes they touch
    let mut boundary_of = vec![Vec::new(); f];
    for (ci, bcn) in red.boundary.iter().enumerate() {
        for &(j, _) in &bcn.terms {
            boundary_of[j].push(ci);
        }
    }

    let mut best_x = vec![false; f];
    let mut best_obj = red.evaluate(&best_x); // all-closed is always feasible
    if let Some(w) = warm_start {
        if w.len() == f && red.check_feasible(w) {
            let obj = red.evaluate(w);
            if obj > best_obj {
                best_obj = obj;
                best_x.copy_from_slice(w);
            }
        }
    }

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let root_state = vec![UNDECIDED; f];
    heap.push(HeapEntry { bound: optimistic_bound(red, &root_state), seq, depth: 0, path: 0 });

    let mut state = vec![UNDECIDED; f];
    let mut expansions: u64 = 0;
    let mut optimal = true;

    let max_steps = budget.max_steps.unwrap_or(u64::MAX);
    while let Some(entry) = heap.pop() {
        if entry.bound < best_obj - BOUND_SLACK {
            continue;
        }
        if expansions >= max_steps
            || (expansions % 1024 == 1023 && deadline.is_some_and(|d| Instant::now() >= d))
        {
            optimal = false;
            break;
        }
        expansions += 1;

        // rebuild the decided state from the path
        state.fill(UNDECIDED);
        for t in 0..entry.depth {
            state[order[t]] = (entry.path >> t & 1) as i8;
        }

        if entry.depth == f {
            let x: Vec<bool> = state.iter().map(|&s| s == 1).collect();
            if red.check_feasible(&x) {
                let obj = red.evaluate(&x);
                if obj > best_obj || (obj == best_obj && lex_less(&x, &best_x)) {
                    best_obj = obj;
                    best_x = x;
                }
            }
            continue;
        }

        let v = order[entry.depth];
        for &value in &[false, true] {
            if value && opens_violate(red, &state, &boundary_of, v) {
                continue;
            }
            state[v] = value as i8;
            let bound = optimistic_bound(red, &state);
            state[v] = UNDECIDED;
            if bound < best_obj - BOUND_SLACK {
                continue;
            }
            seq += 1;
            heap.push(HeapEntry {
                bound,
                seq,
                depth: entry.depth + 1,
                path: entry.path | (u128::from(value) << entry.depth),
            });
        }
    }

    Ok(ExactSolution { x: best_x, objective: best_obj, optimal })
}

fn lex_less(a: &[bool], b: &[bool]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return !x; // false sorts before true
        }
    }
    false
}

/// Upper bound: contribution of decided-open parts plus everything that
/// could still be gained. Edge weights are positive; linear terms count only
/// when positive or already committed.
fn optimistic_bound(red: &ReducedInstance, state: &[i8]) -> f64 {
    let mut acc = 0.0;
    for &(u, v, w) in &red.edges {
        if state[u] != 0 && state[v] != 0 {
            acc += w;
        }
    }
    for (i, &l) in red.lin.iter().enumerate() {
        match state[i] {
            1 => acc += l,
            UNDECIDED => acc += l.max(0.0),
            _ => {}
        }
    }
    acc
}

/// Would opening `v` make some constraint unsatisfiable? Checks the minimal
/// exposure (undecided neighbors closed) of `v` itself, of decided-open free
/// neighbors, and of fixed boundary nodes touching `v`. Opening more
/// neighbors only increases exposure, so a violation here holds for every
/// completion.
fn opens_violate(
    red: &ReducedInstance,
    state: &[i8],
    boundary_of: &[Vec<usize>],
    v: usize,
) -> bool {
    let open_after = |j: usize| state[j] == 1 || j == v;

    let min_lhs = |i: usize| -> f64 {
        let mut prod = red.k[i];
        for &(j, c) in &red.infl[i] {
            if open_after(j) {
                prod *= 1.0 - c;
            }
        }
        1.0 - prod
    };

    if min_lhs(v) - red.b[v] > LEAF_TOL {
        return true;
    }
    for &(j, _) in &red.infl[v] {
        if state[j] == 1 && min_lhs(j) - red.b[j] > LEAF_TOL {
            return true;
        }
    }
    for &ci in &boundary_of[v] {
        let bcn = &red.boundary[ci];
        let mut prod = bcn.k;
        for &(j, c) in &bcn.terms {
            if open_after(j) {
                prod *= 1.0 - c;
            }
        }
        if 1.0 - prod - bcn.b > LEAF_TOL {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    fn instance(
        n: usize,
        edges: Vec<(usize, usize, f64)>,
        p: Vec<f64>,
        phi: Vec<f64>,
        b: Vec<f64>,
        a: Vec<f64>,
    ) -> ResponseInstance {
        let g = WeightedGraph::from_edges(n, edges).unwrap();
        ResponseInstance::new(g, p, phi, b, a).unwrap()
    }

    #[test]
    fn empty_boundary_is_identity_reduction() {
        let inst = instance(
            3,
            vec![(0, 1, 1.0), (1, 2, 2.0)],
            vec![0.5, 0.5],
            vec![0.5; 3],
            vec![0.3; 3],
            vec![0.1; 3],
        );
        let red = ReducedInstance::from_instance(&inst).unwrap();
        assert_eq!(red.num_free(), 3);
        assert_eq!(red.offset(), 0.0);
        assert!(red.k.iter().all(|&k| k == 1.0));
        assert!(red.boundary.is_empty());
    }

    #[test]
    fn all_fixed_leaves_empty_instance_with_full_offset() {
        let inst = instance(
            2,
            vec![(0, 1, 3.0)],
            vec![0.1],
            vec![0.5; 2],
            vec![1.0; 2],
            vec![2.0, 0.0],
        );
        let bc = BoundaryCondition { assignment: vec![Some(true), Some(true)] };
        let red = reduce_with_boundary(&inst, &bc).unwrap();
        assert_eq!(red.num_free(), 0);
        assert_eq!(red.offset(), 5.0); // edge 3.0 + a_0 2.0
        let sol = solve_exact(&red, 40, &SolveBudget::UNLIMITED, None).unwrap();
        assert!(sol.optimal);
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn path_boundary_reduction_by_hand() {
        // path a-b-c, free = {b}, both ends fixed open
        let inst = instance(
            3,
            vec![(0, 1, 2.0), (1, 2, 5.0)],
            vec![0.4, 0.6],
            vec![0.9, 0.5, 0.7],
            vec![1.0; 3],
            vec![0.0; 3],
        );
        let bc = BoundaryCondition {
            assignment: vec![Some(true), None, Some(true)],
        };
        let red = reduce_with_boundary(&inst, &bc).unwrap();
        assert_eq!(red.free_ids(), &[1]);
        assert_eq!(red.lin, vec![7.0]); // w_ab + w_bc
        let expect_k = (1.0 - 0.4 * 0.9) * (1.0 - 0.6 * 0.7);
        assert!((red.k[0] - expect_k).abs() < 1e-15);
    }

    #[test]
    fn boundary_infeasible_detected() {
        // two fixed open nodes with p = phi = 1 and b = 0: the fixed pair
        // already violates, independent of the free node.
        let inst = instance(
            3,
            vec![(0, 1, 1.0), (1, 2, 1.0)],
            vec![1.0, 1.0],
            vec![1.0; 3],
            vec![0.0; 3],
            vec![0.0; 3],
        );
        let bc = BoundaryCondition {
            assignment: vec![Some(true), Some(true), None],
        };
        match reduce_with_boundary(&inst, &bc) {
            Err(Error::BoundaryInfeasible { node }) => assert!(node <= 1),
            other => panic!("expected boundary infeasibility, got {other:?}"),
        }
    }

    #[test]
    fn boundary_constraint_restricts_free_nodes() {
        // fixed open center with b = 0 and one free leaf: opening the leaf
        // would infect the center, so the optimum keeps it closed despite the
        // positive edge weight.
        let inst = instance(
            2,
            vec![(0, 1, 10.0)],
            vec![1.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.0; 2],
        );
        let bc = BoundaryCondition { assignment: vec![Some(true), None] };
        let red = reduce_with_boundary(&inst, &bc).unwrap();
        let sol = solve_exact(&red, 40, &SolveBudget::UNLIMITED, None).unwrap();
        assert_eq!(sol.x, vec![false]);
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn single_free_node_with_gain_opens() {
        let inst = instance(
            1,
            vec![],
            vec![],
            vec![0.0],
            vec![1.0],
            vec![2.0],
        );
        let red = ReducedInstance::from_instance(&inst).unwrap();
        let sol = solve_exact(&red, 40, &SolveBudget::UNLIMITED, None).unwrap();
        assert_eq!(sol.x, vec![true]);
        assert_eq!(sol.objective, 2.0);
        assert!(sol.optimal);
    }

    #[test]
    fn mutual_exclusion_breaks_tie_lexicographically() {
        // single edge, p = phi = 1, b = 0: opening both is infeasible, and
        // every remaining assignment scores 0, so the all-closed vector wins.
        let inst = instance(
            2,
            vec![(0, 1, 1.0)],
            vec![1.0],
            vec![1.0; 2],
            vec![0.0; 2],
            vec![0.0; 2],
        );
        let red = ReducedInstance::from_instance(&inst).unwrap();
        let sol = solve_exact(&red, 40, &SolveBudget::UNLIMITED, None).unwrap();
        assert_eq!(sol.x, vec![false, false]);
        assert_eq!(sol.objective, 0.0);
    }

    #[test]
    fn subproblem_size_limit_enforced() {
        let inst = instance(
            3,
            vec![(0, 1, 1.0), (1, 2, 1.0)],
            vec![0.5; 2],
            vec![0.5; 3],
            vec![1.0; 3],
            vec![0.0; 3],
        );
        let red = ReducedInstance::from_instance(&inst).unwrap();
        assert!(matches!(
            solve_exact(&red, 2, &SolveBudget::UNLIMITED, None),
            Err(Error::SubproblemTooLarge { size: 3, limit: 2 })
        ));
    }

    /// Brute force over full instances for cross-checking the solver.
    fn brute_force(inst: &ResponseInstance) -> (Vec<bool>, f64) {
        let n = inst.n();
        let mut best_obj = f64::NEG_INFINITY;
        let mut best_x = vec![false; n];
        for mask in 0..(1u32 << n) {
            let x: Vec<bool> = (0..n).map(|i| (mask >> (n - 1 - i)) & 1 == 1).collect();
            let mut feasible = true;
            for i in 0..n {
                let xi = if x[i] { 1.0 } else { 0.0 };
                let mut h = 1.0;
                for inc in inst.graph().adj(i) {
                    if x[inc.neighbor] {
                        h *= 1.0 - inst.p()[inc.edge] * inst.phi()[inc.neighbor];
                    }
                }
                if xi - h - inst.b()[i] > LEAF_TOL {
                    feasible = false;
                    break;
                }
            }
            if !feasible {
                continue;
            }
            let obj = crate::instance::evaluate_objective(inst, &x).unwrap();
            if obj > best_obj {
                best_obj = obj;
                best_x = x;
            }
        }
        (best_x, best_obj)
    }

    fn random_instance(seed: u64, n: usize) -> ResponseInstance {
        use rand::Rng;
        let mut rng = crate::rng::rng_from_seed(seed);
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_bool(0.4) {
                    edges.push((i, j, rng.gen_range(0.05..=1.0)));
                }
            }
        }
        if edges.is_empty() {
            edges.push((0, 1, 0.5));
        }
        let m = edges.len();
        let g = WeightedGraph::from_edges(n, edges).unwrap();
        let p = (0..m).map(|_| rng.gen_range(0.0..=1.0)).collect();
        let phi = (0..n).map(|_| rng.gen_range(0.0..=1.0)).collect();
        let b = (0..n).map(|_| rng.gen_range(0.0..=0.6)).collect();
        ResponseInstance::new(g, p, phi, b, vec![0.0; n]).unwrap()
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for seed in 0..40 {
            let inst = random_instance(seed, 8);
            let red = ReducedInstance::from_instance(&inst).unwrap();
            let sol = solve_exact(&red, 40, &SolveBudget::UNLIMITED, None).unwrap();
            let (bx, bobj) = brute_force(&inst);
            assert_eq!(sol.objective, bobj, "seed {seed}");
            assert_eq!(sol.x, bx, "seed {seed}");
            assert!(sol.optimal);
        }
    }

    /// Force the branch-and-bound path by dropping the enumeration threshold:
    /// equal objectives with enumeration on the same instances.
    #[test]
    fn branch_and_bound_matches_enumeration() {
        for seed in 100..130 {
            let n = 14;
            let inst = random_instance(seed, n);
            let red = ReducedInstance::from_instance(&inst).unwrap();
            let enum_sol = enumerate(&red, &SolveBudget::UNLIMITED);
            let bb_sol = branch_and_bound(&red, &SolveBudget::UNLIMITED, None).unwrap();
            assert_eq!(bb_sol.objective, enum_sol.objective, "seed {seed}");
            assert!(red.check_feasible(&bb_sol.x));
            assert!(bb_sol.optimal);
        }
    }

    #[test]
    fn optimum_monotone_in_thresholds() {
        use rand::Rng;
        for seed in 200..220 {
            let inst = random_instance(seed, 9);
            let red = ReducedInstance::from_instance(&inst).unwrap();
            let base = solve_exact(&red, 40, &SolveBudget::UNLIMITED, None).unwrap();

            let mut rng = crate::rng::rng_from_seed(seed ^ 0xfeed);
            let relaxed_b: Vec<f64> =
                inst.b().iter().map(|&b| b + rng.gen_range(0.0..=0.4)).collect();
            let relaxed = ResponseInstance::new(
                inst.graph().clone(),
                inst.p().to_vec(),
                inst.phi().to_vec(),
                relaxed_b,
                inst.a().to_vec(),
            )
            .unwrap();
            let red2 = ReducedInstance::from_instance(&relaxed).unwrap();
            let better = solve_exact(&red2, 40, &SolveBudget::UNLIMITED, None).unwrap();
            assert!(better.objective >= base.objective, "seed {seed}");
        }
    }

    #[test]
    fn warm_start_floor_under_tiny_budget() {
        let inst = random_instance(7, 24);
        let red = ReducedInstance::from_instance(&inst).unwrap();
        // a known feasible assignment: all closed except one isolated-safe node
        let full = solve_exact(&red, 40, &SolveBudget::UNLIMITED, None).unwrap();
        let strangled =
            solve_exact(&red, 40, &SolveBudget::steps(2), Some(&full.x)).unwrap();
        assert!(strangled.objective >= full.objective);
        assert!(!strangled.optimal || strangled.objective == full.objective);
    }

    #[test]
    fn budget_exhaustion_is_flagged_and_feasible() {
        let inst = random_instance(11, 26);
        let red = ReducedInstance::from_instance(&inst).unwrap();
        let sol = solve_exact(&red, 40, &SolveBudget::steps(4), None).unwrap();
        assert!(!sol.optimal);
        assert!(red.check_feasible(&sol.x));
    }
}
