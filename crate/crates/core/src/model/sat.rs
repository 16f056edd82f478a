//! Chronological-backtracking DPLL with two-watched-literal unit propagation.
//!
//! Branching is fixed: the lowest-index unassigned variable, `false` first.

use super::GroundClauseSet;

fn lit_index(lit: i32) -> usize {
    let v = lit.unsigned_abs() as usize - 1;
    2 * v + usize::from(lit < 0)
}

struct Decision {
    trail_len: usize,
    var: usize,
    flipped: bool,
}

struct Solver {
    clauses: Vec<Vec<i32>>,
    watches: Vec<Vec<usize>>,
    value: Vec<Option<bool>>,
    trail: Vec<i32>,
    head: usize,
    decisions: Vec<Decision>,
}

impl Solver {
    fn lit_value(&self, lit: i32) -> Option<bool> {
        self.value[lit.unsigned_abs() as usize - 1].map(|b| b == (lit > 0))
    }

    fn assign(&mut self, lit: i32) {
        self.value[lit.unsigned_abs() as usize - 1] = Some(lit > 0);
        self.trail.push(lit);
    }

    fn enqueue(&mut self, lit: i32) -> bool {
        match self.lit_value(lit) {
            Some(v) => v,
            None => {
                self.assign(lit);
                true
            }
        }
    }

    /// Returns false on conflict.
    fn propagate(&mut self) -> bool {
        while self.head < self.trail.len() {
            let p = self.trail[self.head];
            self.head += 1;
            let falsified = -p;
            let mut ws = std::mem::take(&mut self.watches[lit_index(falsified)]);
            let mut i = 0;
            let mut conflict = false;
            while i < ws.len() {
                let ci = ws[i];
                let clause = &mut self.clauses[ci];
                if clause[0] == falsified {
                    clause.swap(0, 1);
                }
                let other = clause[0];
                if self.value[other.unsigned_abs() as usize - 1].map(|b| b == (other > 0)) == Some(true) {
                    i += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..clause.len() {
                    let cand = clause[k];
                    let val = self.value[cand.unsigned_abs() as usize - 1].map(|b| b == (cand > 0));
                    if val != Some(false) {
                        clause.swap(1, k);
                        self.watches[lit_index(cand)].push(ci);
                        ws.swap_remove(i);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                i += 1;
                if !self.enqueue(other) {
                    conflict = true;
                    break;
                }
            }
            self.watches[lit_index(falsified)] = ws;
            if conflict {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let lit = self.trail.pop().expect("nonempty trail");
            self.value[lit.unsigned_abs() as usize - 1] = None;
        }
        self.head = len;
    }

    /// Flips the most recent unflipped decision. False when none is left.
    fn backtrack(&mut self) -> bool {
        while let Some(d) = self.decisions.pop() {
            self.undo_to(d.trail_len);
            if !d.flipped {
                self.decisions.push(Decision {
                    trail_len: d.trail_len,
                    var: d.var,
                    flipped: true,
                });
                self.assign(d.var as i32 + 1);
                return true;
            }
        }
        false
    }
}

/// Complete satisfiability check. `Some(assignment)` gives one value per
/// variable (index 0 is variable 1).
pub fn sat_solve(g: &GroundClauseSet) -> Option<Vec<bool>> {
    let n = g.variables;
    let mut solver = Solver {
        clauses: Vec::new(),
        watches: vec![Vec::new(); 2 * n],
        value: vec![None; n],
        trail: Vec::new(),
        head: 0,
        decisions: Vec::new(),
    };
    let mut units = Vec::new();
    for c in &g.clauses {
        match c.len() {
            0 => return None,
            1 => units.push(c[0]),
            _ => {
                let ci = solver.clauses.len();
                solver.watches[lit_index(c[0])].push(ci);
                solver.watches[lit_index(c[1])].push(ci);
                solver.clauses.push(c.clone());
            }
        }
    }
    for u in units {
        if !solver.enqueue(u) {
            return None;
        }
    }
    let mut next_free = 0;
    loop {
        if !solver.propagate() {
            if !solver.backtrack() {
                return None;
            }
            next_free = 0;
            continue;
        }
        while next_free < n && solver.value[next_free].is_some() {
            next_free += 1;
        }
        if next_free == n {
            return Some(solver.value.iter().map(|v| v.unwrap_or(false)).collect());
        }
        solver.decisions.push(Decision {
            trail_len: solver.trail.len(),
            var: next_free,
            flipped: false,
        });
        solver.assign(-(next_free as i32 + 1));
    }
}
