//! DIMACS export of arrow statements and a small DPLL solver.
//!
//! The CNF is satisfiable exactly when the arrow FAILS: variables x(copy,
//! color) pick a color per A-copy (exactly one), u(B-copy, color) says a
//! color occurs inside a B-copy, and per B-copy a sequential-counter circuit
//! demands at least t+1 occurring colors.

use crate::arrows::{ArrowStatement, Coloring};
use crate::copies::{enumerate_copies, CopySet};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl Cnf {
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("p cnf {} {}\n", self.num_vars, self.clauses.len()));
        for clause in &self.clauses {
            for lit in clause {
                out.push_str(&lit.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn parse_dimacs(text: &str) -> Result<Cnf> {
        let mut num_vars = None;
        let mut clauses = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("p cnf") {
                let mut parts = rest.split_whitespace();
                let v = parts
                    .next()
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| Error::parse("bad DIMACS header"))?;
                num_vars = Some(v);
                continue;
            }
            let mut clause = Vec::new();
            for token in line.split_whitespace() {
                let lit: i32 = token
                    .parse()
                    .map_err(|_| Error::parse(format!("bad literal {:?}", token)))?;
                if lit == 0 {
                    break;
                }
                clause.push(lit);
            }
            clauses.push(clause);
        }
        Ok(Cnf {
            num_vars: num_vars.ok_or_else(|| Error::parse("missing DIMACS header"))?,
            clauses,
        })
    }
}

/// An exported arrow instance: the CNF, the legend, and the copy sets needed
/// to decode models.
#[derive(Debug, Clone)]
pub struct CnfExport {
    pub cnf: Cnf,
    pub copies_a: CopySet,
    pub copies_b: CopySet,
    pub k: usize,
    pub t: usize,
    /// True when the arrow holds for structural reasons and the CNF is a
    /// bare contradiction.
    pub trivially_unsat: bool,
}

impl CnfExport {
    fn x_var(&self, copy: usize, color: usize) -> usize {
        1 + copy * self.k + color
    }

    /// Human- and machine-readable legend sidecar.
    pub fn legend_text(&self) -> String {
        let mut out = String::new();
        out.push_str(
            "c legend: x <var> <A-copy> <color>; u <var> <B-copy> <color>; s <var> (counter)\n",
        );
        out.push_str(&format!("param k {}\n", self.k));
        out.push_str(&format!("param t {}\n", self.t));
        for (i, c) in self.copies_a.copies().iter().enumerate() {
            let elems = c
                .subset()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!("copyA {} {}\n", i, elems));
        }
        for (j, c) in self.copies_b.copies().iter().enumerate() {
            let elems = c
                .subset()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",");
            out.push_str(&format!("copyB {} {}\n", j, elems));
        }
        if self.trivially_unsat {
            out.push_str("trivial unsat\n");
            return out;
        }
        let n = self.copies_a.len();
        let nb = self.copies_b.len();
        for i in 0..n {
            for c in 0..self.k {
                out.push_str(&format!("x {} {} {}\n", 1 + i * self.k + c, i, c));
            }
        }
        for j in 0..nb {
            for c in 0..self.k {
                out.push_str(&format!(
                    "u {} {} {}\n",
                    1 + n * self.k + j * self.k + c,
                    j,
                    c
                ));
            }
        }
        for v in (1 + (n + nb) * self.k)..=self.cnf.num_vars {
            out.push_str(&format!("s {}\n", v));
        }
        out
    }

    /// Read a defeating coloring off a satisfying model (indexed by variable,
    /// entry 0 unused or var 1 at index 0 -- here `model[v-1]` is variable v).
    pub fn decode_model(&self, model: &[bool]) -> Result<Coloring> {
        if self.trivially_unsat {
            return Err(Error::input("trivially unsatisfiable export has no models"));
        }
        if model.len() < self.cnf.num_vars {
            return Err(Error::input("model does not cover all variables"));
        }
        let mut assignment = Vec::with_capacity(self.copies_a.len());
        for i in 0..self.copies_a.len() {
            let mut chosen = None;
            for c in 0..self.k {
                if model[self.x_var(i, c) - 1] {
                    if chosen.is_some() {
                        return Err(Error::input(format!(
                            "copy {} has two colors in the model",
                            i
                        )));
                    }
                    chosen = Some(c);
                }
            }
            let c = chosen
                .ok_or_else(|| Error::input(format!("copy {} has no color in the model", i)))?;
            assignment.push(c);
        }
        Coloring::new(self.copies_a.clone(), self.k, assignment)
    }
}

/// Encode the failure of the arrow statement as CNF.
pub fn export_cnf(stmt: &ArrowStatement) -> Result<CnfExport> {
    let copies_a = enumerate_copies(&stmt.pattern, &stmt.host)?;
    let copies_b = enumerate_copies(&stmt.big, &stmt.host)?;
    if copies_b.is_empty() {
        return Err(Error::no_host(format!(
            "no copy of {} in {}",
            stmt.big, stmt.host
        )));
    }
    let n = copies_a.len();
    let nb = copies_b.len();
    let k = stmt.k;
    let t = stmt.t;
    let inner = enumerate_copies(&stmt.pattern, &stmt.big)?.len();
    if t >= k || inner <= t || n == 0 {
        // The arrow holds outright; failure is unsatisfiable.
        let cnf = Cnf {
            num_vars: 1,
            clauses: vec![vec![1], vec![-1]],
        };
        return Ok(CnfExport {
            cnf,
            copies_a,
            copies_b,
            k,
            t,
            trivially_unsat: true,
        });
    }
    let inside: Vec<Vec<usize>> = copies_b
        .copies()
        .iter()
        .map(|bc| copies_a.indices_inside(bc))
        .collect();
    let x = |i: usize, c: usize| -> i32 { (1 + i * k + c) as i32 };
    let u = |j: usize, c: usize| -> i32 { (1 + n * k + j * k + c) as i32 };
    let mut clauses: Vec<Vec<i32>> = Vec::new();
    // Exactly one color per A-copy.
    for i in 0..n {
        clauses.push((0..k).map(|c| x(i, c)).collect());
        for c1 in 0..k {
            for c2 in (c1 + 1)..k {
                clauses.push(vec![-x(i, c1), -x(i, c2)]);
            }
        }
    }
    // u(j,c) <-> some inner copy of j has color c.
    for (j, ids) in inside.iter().enumerate() {
        for c in 0..k {
            let mut definition = vec![-u(j, c)];
            definition.extend(ids.iter().map(|&i| x(i, c)));
            clauses.push(definition);
            for &i in ids {
                clauses.push(vec![-x(i, c), u(j, c)]);
            }
        }
    }
    // Per B-copy: at least t+1 of its u variables, by sequential counter.
    let mut next_var = 1 + (n + nb) * k;
    let r = t + 1;
    #[allow(clippy::needless_range_loop)]
    for j in 0..nb {
        // s[i][q] (i in 1..=k, q in 1..=r): at least q of the first i inputs.
        let mut s = vec![vec![0i32; r + 1]; k + 1];
        for i in 1..=k {
            for q in 1..=r {
                s[i][q] = next_var as i32;
                next_var += 1;
            }
        }
        for i in 1..=k {
            let input = u(j, i - 1);
            for q in 1..=r {
                // s[i][q] -> s[i-1][q] or input
                let mut c1 = vec![-s[i][q]];
                if i > 1 {
                    c1.push(s[i - 1][q]);
                }
                c1.push(input);
                clauses.push(c1);
                // s[i][q] -> s[i-1][q] or s[i-1][q-1]  (q >= 2)
                if q >= 2 {
                    let mut c2 = vec![-s[i][q]];
                    if i > 1 {
                        c2.push(s[i - 1][q]);
                        c2.push(s[i - 1][q - 1]);
                    }
                    clauses.push(c2);
                }
            }
        }
        clauses.push(vec![s[k][r]]);
    }
    let cnf = Cnf {
        num_vars: next_var - 1,
        clauses,
    };
    Ok(CnfExport {
        cnf,
        copies_a,
        copies_b,
        k,
        t,
        trivially_unsat: false,
    })
}

/// Plain DPLL with unit propagation; deterministic branching on the lowest
/// unassigned variable, true first. Returns a full model on satisfiability.
pub fn dpll(cnf: &Cnf) -> Option<Vec<bool>> {
    let mut assignment: Vec<Option<bool>> = vec![None; cnf.num_vars];
    if solve(cnf, &mut assignment) {
        Some(assignment.into_iter().map(|v| v.unwrap_or(false)).collect())
    } else {
        None
    }
}

fn solve(cnf: &Cnf, assignment: &mut Vec<Option<bool>>) -> bool {
    // Unit propagation to fixpoint.
    let mut trail: Vec<usize> = Vec::new();
    loop {
        let mut changed = false;
        for clause in &cnf.clauses {
            let mut satisfied = false;
            let mut unassigned = None;
            let mut unassigned_count = 0;
            for &lit in clause {
                let var = lit.unsigned_abs() as usize - 1;
                match assignment[var] {
                    Some(v) if v == (lit > 0) => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        unassigned = Some(lit);
                        unassigned_count += 1;
                    }
                }
            }
            if satisfied {
                continue;
            }
            match unassigned_count {
                0 => {
                    for &var in &trail {
                        assignment[var] = None;
                    }
                    return false;
                }
                1 => {
                    let lit = unassigned.unwrap();
                    let var = lit.unsigned_abs() as usize - 1;
                    assignment[var] = Some(lit > 0);
                    trail.push(var);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let branch = (0..cnf.num_vars).find(|&v| assignment[v].is_none());
    let Some(var) = branch else {
        return true;
    };
    for value in [true, false] {
        assignment[var] = Some(value);
        if solve(cnf, assignment) {
            return true;
        }
        assignment[var] = None;
    }
    for &var in &trail {
        assignment[var] = None;
    }
    false
}
