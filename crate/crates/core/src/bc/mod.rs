//! Branch-and-cut with root cuts, product-score variable selection and
//! best-bound node selection.
//!
//! Internally every instance is maximized; minimization instances have their
//! objective negated, so LP values and the incumbent trace are in max form.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::arith::{RVector, Rational};
use crate::cuts::CutPlane;
use crate::ip::{IPInstance, ObjSense};
use crate::lp::{Constraint, LinearProgram, LpOptimum, LpOutcome, Sense};

pub const DEFAULT_KAPPA: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BCConfig {
    pub kappa: usize,
    pub gamma: Rational,
    /// When false, nodes are never fathomed by bound.
    pub bounding: bool,
}

impl Default for BCConfig {
    fn default() -> Self {
        BCConfig { kappa: DEFAULT_KAPPA, gamma: Rational::new(1, 1_000_000), bounding: true }
    }
}

impl BCConfig {
    pub fn with_kappa(kappa: usize) -> Self {
        BCConfig { kappa: kappa.max(1), ..Self::default() }
    }
}

/// A branching bound `x_var <= level` or `x_var >= level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BranchBound {
    pub var: usize,
    pub sense: Sense,
    pub level: i64,
}

impl BranchBound {
    pub fn le(var: usize, level: i64) -> Self {
        BranchBound { var, sense: Sense::Le, level }
    }

    pub fn ge(var: usize, level: i64) -> Self {
        BranchBound { var, sense: Sense::Ge, level }
    }

    pub fn to_constraint(&self, n: usize) -> Constraint {
        Constraint::new(RVector::unit(n, self.var), self.sense, Rational::from(self.level))
    }
}

impl fmt::Display for BranchBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.sense == Sense::Le { "<=" } else { ">=" };
        write!(f, "x{}{}{}", self.var, op, self.level)
    }
}

pub type BranchSet = Vec<BranchBound>;

/// Tightest `<=` and tightest `>=` per variable, ordered by variable (`<=` first).
pub fn reduce_branchset(sigma: &[BranchBound]) -> BranchSet {
    let mut tight: BTreeMap<(usize, u8), i64> = BTreeMap::new();
    for b in sigma {
        let key = (b.var, if b.sense == Sense::Le { 0 } else { 1 });
        tight
            .entry(key)
            .and_modify(|l| *l = if b.sense == Sense::Le { (*l).min(b.level) } else { (*l).max(b.level) })
            .or_insert(b.level);
    }
    tight
        .into_iter()
        .map(|((var, s), level)| BranchBound { var, sense: if s == 0 { Sense::Le } else { Sense::Ge }, level })
        .collect()
}

fn sigma_text(sigma: &[BranchBound]) -> String {
    if sigma.is_empty() {
        return "{}".into();
    }
    sigma.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeStatus {
    Branched { var: usize },
    FathomedInfeasible,
    FathomedIntegral,
    FathomedByBound,
    OpenCapped,
}

impl NodeStatus {
    pub fn tag(&self) -> &'static str {
        match self {
            NodeStatus::Branched { .. } => "branched",
            NodeStatus::FathomedInfeasible => "infeasible",
            NodeStatus::FathomedIntegral => "integral",
            NodeStatus::FathomedByBound => "bound",
            NodeStatus::OpenCapped => "capped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BCNode {
    pub id: usize,
    pub parent: Option<usize>,
    /// Reduced branching constraints leading to this node.
    pub sigma: BranchSet,
    pub depth: usize,
    pub lp: LpOutcome,
    pub status: NodeStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BCTree {
    /// Nodes indexed by creation id.
    pub nodes: Vec<BCNode>,
    /// Node ids in the order they were processed.
    pub order: Vec<usize>,
    /// `(node id, value)` each time the incumbent improved; values in max form.
    pub incumbent_trace: Vec<(usize, Rational)>,
    pub optimal: Option<RVector>,
    pub capped: bool,
    sense: ObjSense,
    offset: Rational,
}

impl BCTree {
    /// Number of nodes created.
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// Objective of the incumbent in the instance's own sense, offset included.
    pub fn optimal_value(&self) -> Option<Rational> {
        let (_, v) = self.incumbent_trace.last()?;
        let v = if self.sense == ObjSense::Min { -v } else { v.clone() };
        Some(v + &self.offset)
    }

    /// Nodes in exploration order followed by nodes left open by the cap.
    pub fn exploration(&self) -> impl Iterator<Item = &BCNode> + '_ {
        let processed: Vec<bool> = {
            let mut p = vec![false; self.nodes.len()];
            for &i in &self.order {
                p[i] = true;
            }
            p
        };
        self.order.iter().map(|&i| &self.nodes[i]).chain(self.nodes.iter().filter(move |n| !processed[n.id]))
    }
}

/// Branching score of a fractional variable. `Infinite` ranks above every finite score.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Score {
    Finite(Rational),
    Infinite,
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Score::Infinite, Score::Infinite) => Ordering::Equal,
            (Score::Infinite, _) => Ordering::Greater,
            (_, Score::Infinite) => Ordering::Less,
            (Score::Finite(a), Score::Finite(b)) => a.cmp(b),
        }
    }
}

struct Children {
    down: (BranchSet, LpOutcome),
    up: (BranchSet, LpOutcome),
}

fn node_lp(base: &LinearProgram, sigma: &[BranchBound]) -> LpOutcome {
    let n = base.n();
    base.add_constraints(sigma.iter().map(|b| b.to_constraint(n))).expect("branch rows match n").solve()
}

fn child_sets(sigma: &[BranchBound], i: usize, v: &Rational) -> (BranchSet, BranchSet) {
    let floor = v.floor().to_i64().expect("branching level fits in i64");
    let mut down = sigma.to_vec();
    down.push(BranchBound::le(i, floor));
    let mut up = sigma.to_vec();
    up.push(BranchBound::ge(i, floor + 1));
    (reduce_branchset(&down), reduce_branchset(&up))
}

fn score_children(z: &Rational, gamma: &Rational, down: &LpOutcome, up: &LpOutcome) -> Score {
    match (down.value(), up.value()) {
        (Some(zl), Some(zr)) => Score::Finite((z - zl).max(gamma.clone()) * (z - zr).max(gamma.clone())),
        _ => Score::Infinite,
    }
}

fn score_variable(base: &LinearProgram, sigma: &[BranchBound], opt: &LpOptimum, i: usize, gamma: &Rational) -> (Score, Children) {
    let (d, u) = child_sets(sigma, i, &opt.vertex[i]);
    let dl = node_lp(base, &d);
    let ul = node_lp(base, &u);
    (score_children(&opt.value, gamma, &dl, &ul), Children { down: (d, dl), up: (u, ul) })
}

/// Product score of branching on `i` at a node with branching set `sigma`,
/// where `lp` is the LP (relaxation plus root cuts) without `sigma`.
pub fn product_score(lp: &LinearProgram, sigma: &[BranchBound], opt: &LpOptimum, i: usize, gamma: &Rational) -> crate::Result<Score> {
    if opt.vertex[i].is_integer() {
        return Err(crate::Error::IntegralCoordinate(i));
    }
    Ok(score_variable(lp, sigma, opt, i, gamma).0)
}

/// The root LP: relaxation in max form plus the root cuts.
pub fn root_lp(ip: &IPInstance, root_cuts: &[CutPlane]) -> LinearProgram {
    ip.relaxation().add_constraints(root_cuts.iter().map(CutPlane::to_constraint)).expect("cut length matches n")
}

/// Runs branch-and-cut. Never fails; the node cap is reported through
/// [`BCTree::capped`] and [`NodeStatus::OpenCapped`].
pub fn run(ip: &IPInstance, root_cuts: &[CutPlane], config: &BCConfig) -> BCTree {
    let base = root_lp(ip, root_cuts);
    let kappa = config.kappa.max(1);
    let mut nodes = vec![BCNode { id: 0, parent: None, sigma: Vec::new(), depth: 0, lp: node_lp(&base, &[]), status: NodeStatus::OpenCapped }];
    let mut open: Vec<usize> = vec![0];
    let mut order = Vec::new();
    let mut trace: Vec<(usize, Rational)> = Vec::new();
    let mut best: Option<RVector> = None;
    let mut capped = false;

    while !open.is_empty() {
        // Best bound first, infeasible nodes last, ties by creation order.
        let pos = (0..open.len())
            .max_by(|&a, &b| {
                let (na, nb) = (&nodes[open[a]], &nodes[open[b]]);
                let bound = |n: &BCNode| n.lp.value().cloned();
                match (bound(na), bound(nb)) {
                    (Some(x), Some(y)) => x.cmp(&y),
                    (Some(_), None) => Ordering::Greater,
                    (None, Some(_)) => Ordering::Less,
                    (None, None) => Ordering::Equal,
                }
                .then(nb.id.cmp(&na.id))
            })
            .expect("open is non-empty");
        let id = open.remove(pos);
        let opt = match &nodes[id].lp {
            LpOutcome::Optimal(o) => o.clone(),
            LpOutcome::Infeasible | LpOutcome::Unbounded => {
                order.push(id);
                nodes[id].status = NodeStatus::FathomedInfeasible;
                continue;
            }
        };
        let incumbent = trace.last().map(|(_, v)| v.clone());
        if opt.vertex.is_integral() {
            order.push(id);
            nodes[id].status = NodeStatus::FathomedIntegral;
            if incumbent.as_ref().is_none_or(|inc| opt.value > *inc) {
                trace.push((id, opt.value.clone()));
                best = Some(opt.vertex.clone());
            }
            continue;
        }
        if config.bounding && incumbent.as_ref().is_some_and(|inc| opt.value <= *inc) {
            order.push(id);
            nodes[id].status = NodeStatus::FathomedByBound;
            continue;
        }
        if nodes.len() + 2 > kappa {
            capped = true;
            break;
        }
        order.push(id);
        let sigma = nodes[id].sigma.clone();
        let mut chosen: Option<(usize, Score, Children)> = None;
        for i in (0..opt.vertex.len()).filter(|&i| !opt.vertex[i].is_integer()) {
            let (score, children) = score_variable(&base, &sigma, &opt, i, &config.gamma);
            if chosen.as_ref().is_none_or(|(_, s, _)| score > *s) {
                chosen = Some((i, score, children));
            }
        }
        let (var, _, children) = chosen.expect("fractional vertex has a fractional coordinate");
        nodes[id].status = NodeStatus::Branched { var };
        let depth = nodes[id].depth + 1;
        for (sigma, lp) in [children.down, children.up] {
            let cid = nodes.len();
            nodes.push(BCNode { id: cid, parent: Some(id), sigma, depth, lp, status: NodeStatus::OpenCapped });
            open.push(cid);
        }
    }

    BCTree {
        nodes,
        order,
        incumbent_trace: trace,
        optimal: if capped { None } else { best },
        capped,
        sense: ip.sense(),
        offset: ip.offset().clone(),
    }
}

/// Discrete shape of the tree: per node in exploration order, its reduced
/// branching set, status and branching variable. LP values are left out.
pub fn fingerprint(tree: &BCTree) -> String {
    let mut s = String::new();
    for node in tree.exploration() {
        write!(s, "{} {}", sigma_text(&node.sigma), node.status.tag()).unwrap();
        if let NodeStatus::Branched { var } = node.status {
            write!(s, " {var}").unwrap();
        }
        s.push(';');
    }
    s
}

/// One line per node: `node <id> parent <p> sigma <...> status <tag> [var <i>] [z <value>]`.
pub fn dump(tree: &BCTree) -> String {
    let mut s = String::new();
    for node in tree.exploration() {
        let parent = node.parent.map_or_else(|| "-".to_string(), |p| p.to_string());
        write!(s, "node {} parent {} sigma {} status {}", node.id, parent, sigma_text(&node.sigma), node.status.tag()).unwrap();
        if let NodeStatus::Branched { var } = node.status {
            write!(s, " var {var}").unwrap();
        }
        if let Some(z) = node.lp.value() {
            write!(s, " z {z}").unwrap();
        }
        s.push('\n');
    }
    s
}
