//! Completion of linear PDE systems in `ξ(x, y)`, `η(x, y)` to involutive form.
//!
//! The system is kept autoreduced and solved for leading derivatives. All
//! integrability conditions (cross-derivatives of pairs whose leaders belong
//! to the same unknown) are reduced and re-inserted until they all vanish.
//! Termination follows from Dickson's lemma on the leading multi-indices.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use crate::detgen::{LinDiffPoly, LinDiffSystem, Slot, Unknown};
use crate::error::{Error, Result};
use crate::jetcore::RatFunc;

/// Total order on slots, compatible with differentiation.
///
/// Both variants compare the derivative part independently of the unknown
/// (the unknown only breaks ties, or comes first for an elimination order),
/// so `D1 u > D2 u` implies `D1 v > D2 v` for every pair of unknowns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ranking {
    /// Total order, then degree in the preferred direction, then unknown.
    Orderly { x_first: bool, top: Unknown },
    /// Unknown first, then as `Orderly`.
    Elimination { x_first: bool, top: Unknown },
}

impl Ranking {
    fn key(&self, s: &Slot) -> [u32; 3] {
        let (x_first, top, elim) = match *self {
            Ranking::Orderly { x_first, top } => (x_first, top, false),
            Ranking::Elimination { x_first, top } => (x_first, top, true),
        };
        let pref = if x_first { s.dx } else { s.dy };
        let u = u32::from(s.unknown == top);
        if elim {
            [u, s.order(), pref]
        } else {
            [s.order(), pref, u]
        }
    }

    pub fn cmp(&self, a: &Slot, b: &Slot) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    pub fn is_orderly(&self) -> bool {
        matches!(self, Ranking::Orderly { .. })
    }

    /// Highest-ranked slot of `p`.
    pub fn leader(&self, p: &LinDiffPoly) -> Option<Slot> {
        p.slots().copied().max_by(|a, b| self.cmp(a, b))
    }

    pub fn sort(&self, slots: &mut [Slot]) {
        slots.sort_by(|a, b| self.cmp(a, b));
    }
}

impl Default for Ranking {
    fn default() -> Self {
        default_ranking()
    }
}

/// Total order, then degree in `x`, then `ξ < η`.
pub fn default_ranking() -> Ranking {
    Ranking::Orderly {
        x_first: true,
        top: Unknown::Eta,
    }
}

/// Result of completion: equations solved for their leaders, plus the initial-data slots.
#[derive(Clone, Debug)]
pub struct InvolutiveSystem {
    pub ranking: Ranking,
    /// Each equation has its leader with coefficient 1.
    pub equations: Vec<LinDiffPoly>,
    pub leaders: Vec<Slot>,
    /// Parametric derivatives in increasing ranking order.
    pub parametric: Vec<Slot>,
}

impl InvolutiveSystem {
    /// Index of an equation whose leader divides `s`, with the derivative taking one to the other.
    pub fn leader_dividing(&self, s: &Slot) -> Option<(usize, (u32, u32))> {
        self.leaders
            .iter()
            .enumerate()
            .find_map(|(i, l)| l.divides(s).map(|d| (i, d)))
    }

    pub fn max_leader_order(&self) -> u32 {
        self.leaders.iter().map(Slot::order).max().unwrap_or(0)
    }

    pub fn max_parametric_order(&self) -> u32 {
        self.parametric.iter().map(Slot::order).max().unwrap_or(0)
    }

    /// All denominators appearing in the solved equations.
    pub fn denominators(&self) -> Vec<crate::jetcore::MPoly> {
        let mut out: Vec<crate::jetcore::MPoly> = Vec::new();
        for e in &self.equations {
            for (_, c) in e.terms() {
                if !c.is_polynomial() && !out.contains(c.den()) {
                    out.push(c.den().clone());
                }
            }
        }
        out
    }
}

/// Size of the solution space: the number of parametric derivatives.
pub fn solution_dimension(inv: &InvolutiveSystem) -> usize {
    inv.parametric.len()
}

/// Reduces `p` modulo the solved equations of `sys`.
pub fn reduce(p: &LinDiffPoly, sys: &InvolutiveSystem) -> LinDiffPoly {
    let mut basis = Basis::new(sys.ranking);
    for (e, l) in sys.equations.iter().zip(&sys.leaders) {
        basis.push(*l, e.clone());
    }
    basis.reduce(p.clone())
}

/// Cross-derivative of two solved equations whose leaders share an unknown.
fn cross_derivative(a: (&Slot, &LinDiffPoly), b: (&Slot, &LinDiffPoly)) -> Option<LinDiffPoly> {
    let (la, ea) = a;
    let (lb, eb) = b;
    if la.unknown != lb.unknown {
        return None;
    }
    let (mx, my) = (la.dx.max(lb.dx), la.dy.max(lb.dy));
    let da = ea.derivative(mx - la.dx, my - la.dy);
    let db = eb.derivative(mx - lb.dx, my - lb.dy);
    Some(da.sub(&db))
}

struct Entry {
    id: u64,
    leader: Slot,
    poly: LinDiffPoly,
}

struct Basis {
    ranking: Ranking,
    entries: Vec<Entry>,
    next_id: u64,
    derivs: HashMap<(u64, u32, u32), LinDiffPoly>,
}

impl Basis {
    fn new(ranking: Ranking) -> Self {
        Basis {
            ranking,
            entries: Vec::new(),
            next_id: 0,
            derivs: HashMap::new(),
        }
    }

    fn fresh_id(&mut self) -> u64 {
        self.next_id += 1;
        self.next_id
    }

    fn push(&mut self, leader: Slot, poly: LinDiffPoly) {
        let id = self.fresh_id();
        self.entries.push(Entry { id, leader, poly });
    }

    fn derivative(&mut self, idx: usize, dx: u32, dy: u32) -> LinDiffPoly {
        let id = self.entries[idx].id;
        if let Some(d) = self.derivs.get(&(id, dx, dy)) {
            return d.clone();
        }
        let d = if dx == 0 && dy == 0 {
            self.entries[idx].poly.clone()
        } else if dy > 0 {
            self.derivative(idx, dx, dy - 1).partial(false)
        } else {
            self.derivative(idx, dx - 1, dy).partial(true)
        };
        self.derivs.insert((id, dx, dy), d.clone());
        d
    }

    fn find_reducible(&self, p: &LinDiffPoly, skip: Option<&Slot>) -> Option<(Slot, usize, (u32, u32))> {
        let mut slots: Vec<Slot> = p.slots().copied().filter(|s| Some(s) != skip).collect();
        slots.sort_by(|a, b| self.ranking.cmp(b, a));
        for s in slots {
            for (i, e) in self.entries.iter().enumerate() {
                if let Some(d) = e.leader.divides(&s) {
                    return Some((s, i, d));
                }
            }
        }
        None
    }

    fn reduce(&mut self, p: LinDiffPoly) -> LinDiffPoly {
        self.reduce_except(p, None)
    }

    fn reduce_except(&mut self, mut p: LinDiffPoly, skip: Option<&Slot>) -> LinDiffPoly {
        while let Some((s, i, (dx, dy))) = self.find_reducible(&p, skip) {
            let c = p.coeff(&s).expect("present").clone();
            let d = self.derivative(i, dx, dy);
            p = p.sub_scaled(&c, &d);
            debug_assert!(p.coeff(&s).is_none(), "reduction must eliminate {s}");
        }
        p
    }

    /// Inserts a new equation; displaced equations are appended to `queue`.
    fn insert(&mut self, p: LinDiffPoly, queue: &mut Vec<LinDiffPoly>) -> Result<bool> {
        let r = self.reduce(p);
        let Some(lead) = self.ranking.leader(&r) else {
            return Ok(false);
        };
        let pivot = r.coeff(&lead).expect("leader present").clone();
        if pivot.is_zero() {
            return Err(Error::Internal(format!("zero pivot for {lead}")));
        }
        let r = r.scale(&pivot.inv()?);

        let mut kept = Vec::with_capacity(self.entries.len() + 1);
        for e in std::mem::take(&mut self.entries) {
            if lead.divides(&e.leader).is_some() {
                queue.push(e.poly);
            } else {
                kept.push(e);
            }
        }
        self.entries = kept;
        self.push(lead, r);

        let n = self.entries.len() - 1;
        for i in 0..n {
            let leader = self.entries[i].leader;
            let touched = self.entries[i]
                .poly
                .slots()
                .any(|s| *s != leader && lead.divides(s).is_some());
            if touched {
                let poly = self.entries[i].poly.clone();
                let reduced = self.reduce_except(poly, Some(&leader));
                let id = self.fresh_id();
                self.entries[i].poly = reduced;
                self.entries[i].id = id;
            }
        }
        Ok(true)
    }

    fn integrability_conditions(&mut self, done: &mut HashSet<(u64, u64)>) -> Vec<LinDiffPoly> {
        let mut out = Vec::new();
        let n = self.entries.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let key = (self.entries[i].id, self.entries[j].id);
                if self.entries[i].leader.unknown != self.entries[j].leader.unknown
                    || !done.insert(key)
                {
                    continue;
                }
                let s = cross_derivative(
                    (&self.entries[i].leader, &self.entries[i].poly),
                    (&self.entries[j].leader, &self.entries[j].poly),
                )
                .expect("same unknown");
                let r = self.reduce(s);
                if !r.is_zero() {
                    out.push(r);
                }
            }
        }
        out
    }
}

/// Completes `sys` to involutive form under `ranking`.
pub fn complete(sys: &LinDiffSystem, ranking: Ranking) -> Result<InvolutiveSystem> {
    let mut basis = Basis::new(ranking);
    let mut queue: Vec<LinDiffPoly> = sys.equations.iter().rev().cloned().collect();
    let mut done = HashSet::new();
    loop {
        while let Some(p) = queue.pop() {
            basis.insert(p, &mut queue)?;
        }
        let mut pending = basis.integrability_conditions(&mut done);
        if pending.is_empty() {
            // full recheck, independent of the pair memo
            pending = basis.integrability_conditions(&mut HashSet::new());
            if pending.is_empty() {
                break;
            }
        }
        queue.extend(pending);
    }

    let mut entries: Vec<(Slot, LinDiffPoly)> = basis
        .entries
        .into_iter()
        .map(|e| (e.leader, e.poly))
        .collect();
    entries.sort_by(|a, b| ranking.cmp(&a.0, &b.0));
    let leaders: Vec<Slot> = entries.iter().map(|e| e.0).collect();
    let equations: Vec<LinDiffPoly> = entries.into_iter().map(|e| e.1).collect();
    let parametric = parametric_slots(&leaders, ranking)?;
    Ok(InvolutiveSystem {
        ranking,
        equations,
        leaders,
        parametric,
    })
}

fn parametric_slots(leaders: &[Slot], ranking: Ranking) -> Result<Vec<Slot>> {
    let mut out = Vec::new();
    for u in Unknown::ALL {
        let own: Vec<&Slot> = leaders.iter().filter(|l| l.unknown == u).collect();
        let bx = own.iter().filter(|l| l.dy == 0).map(|l| l.dx).min();
        let by = own.iter().filter(|l| l.dx == 0).map(|l| l.dy).min();
        let (Some(bx), Some(by)) = (bx, by) else {
            return Err(Error::InfiniteDimensional);
        };
        for dx in 0..bx {
            for dy in 0..by {
                let s = Slot::new(u, dx, dy);
                if !own.iter().any(|l| l.divides(&s).is_some()) {
                    out.push(s);
                }
            }
        }
    }
    ranking.sort(&mut out);
    Ok(out)
}

/// Independent audit of an involutive system.
///
/// Checks solved form, mutual reduction, and that every integrability
/// condition reduces to zero; returns a description of the first failure.
pub fn verify_involutive(inv: &InvolutiveSystem) -> std::result::Result<(), String> {
    for (e, l) in inv.equations.iter().zip(&inv.leaders) {
        if inv.ranking.leader(e) != Some(*l) {
            return Err(format!("{l} is not the leader of {e}"));
        }
        if e.coeff(l) != Some(&RatFunc::one()) {
            return Err(format!("equation for {l} is not solved"));
        }
        for s in e.slots().filter(|s| *s != l) {
            if inv.leaders.iter().any(|m| m.divides(s).is_some()) {
                return Err(format!("tail slot {s} of {l} is reducible"));
            }
        }
    }
    for (i, a) in inv.leaders.iter().enumerate() {
        for (j, b) in inv.leaders.iter().enumerate() {
            if i != j && a.divides(b).is_some() {
                return Err(format!("leader {a} divides leader {b}"));
            }
        }
    }
    let n = inv.leaders.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let Some(s) = cross_derivative(
                (&inv.leaders[i], &inv.equations[i]),
                (&inv.leaders[j], &inv.equations[j]),
            ) else {
                continue;
            };
            let r = reduce(&s, inv);
            if !r.is_zero() {
                return Err(format!(
                    "integrability condition of {} and {} leaves {r}",
                    inv.leaders[i], inv.leaders[j]
                ));
            }
        }
    }
    Ok(())
}
