//! Observed piece sizes against the size bounds of the construction.

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::error::Result;
use crate::harness::instance::Instance;
use crate::unfold::Unfolder;

/// `log2` of the explicit bound
/// `2|Q|(3·2^|Σ|·|Σ|^|Σ|·|Q|^(2|Σ|))^((2|Σ|+2)^|Σ|)` on the largest box.
pub fn log2_box_bound(states: usize, actions: usize) -> f64 {
    let s = actions as f64;
    let q = states as f64;
    let base = 3f64.log2() + s + s * s.max(1.0).log2() + 2.0 * s * q.log2();
    (2.0 * q).log2() + (2.0 * s + 2.0).powf(s) * base
}

/// Exponent `d = (2|Σ|+2)^(|Σ|+1)` of the polynomial size bound.
pub fn size_exponent(actions: usize) -> u128 {
    (2 * actions as u128 + 2).pow(actions as u32 + 1)
}

/// Observed maxima per height `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightRow {
    pub n: usize,
    /// Largest triangle of height `n`; `None` for `n = 0`.
    pub tau: Option<usize>,
    pub beta: usize,
    /// Right-hand side of the triangle recurrence, for `n ≥ 2`.
    pub tau_bound: Option<u128>,
}

/// Copy count of one connected box against the triangle size of its
/// height.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CopyRow {
    pub set: String,
    pub anchor: String,
    pub max_out_degree: usize,
    pub copies: u32,
    /// `τ̂_{|T|} + 1`.
    pub limit: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexityReport {
    pub source_states: usize,
    pub actions: usize,
    pub rows: Vec<HeightRow>,
    pub copies: Vec<CopyRow>,
    pub unfolding_states: usize,
    pub local_states: Vec<usize>,
    /// `log2` of the explicit bound on `β_{|Σ|}`.
    pub log2_box_bound: f64,
    /// Exponent `d = (2|Σ|+2)^(|Σ|+1)` of the polynomial bound.
    pub exponent: u128,
}

impl ComplexityReport {
    pub fn build(instance: &Instance) -> Result<Self> {
        let mut u = Unfolder::new(&instance.alphabet, &instance.automaton)?;
        Self::from_unfolder(&mut u, instance.distribution.len())
    }

    /// Builds every piece of `u` and reads the sizes off.
    pub fn from_unfolder(u: &mut Unfolder, processes: usize) -> Result<Self> {
        u.build_all()?;
        let (al, src) = (u.alphabet(), u.source());
        let n_actions = al.len();
        let q = src.len() as u128;
        let mut tau = vec![0usize; n_actions + 1];
        let mut beta = vec![0usize; n_actions + 1];
        for t in u.triangles() {
            let h = t.height();
            tau[h] = tau[h].max(t.len());
        }
        for b in u.boxes() {
            let h = b.height();
            beta[h] = beta[h].max(b.len());
        }
        let rows = (0..=n_actions)
            .map(|n| HeightRow {
                n,
                tau: (n >= 1).then_some(tau[n]),
                beta: beta[n],
                tau_bound: (n >= 2).then(|| {
                    (n as u128)
                        .saturating_mul(tau[n - 1] as u128)
                        .saturating_mul(1 + 2 * q * beta[n - 1] as u128)
                }),
            })
            .collect();
        let copies: Vec<CopyRow> = u
            .connected_logs()
            .iter()
            .map(|log| CopyRow {
                set: al.format_set(log.set),
                anchor: src.name(log.anchor).to_string(),
                max_out_degree: log.max_out_degree,
                copies: log.copies,
                limit: tau[log.set.len()] + 1,
            })
            .collect();
        let unfolding_states = u.unfolding()?.len();
        let log2_box_bound = log2_box_bound(src.len(), n_actions);
        Ok(ComplexityReport {
            source_states: src.len(),
            actions: n_actions,
            rows,
            copies,
            unfolding_states,
            local_states: vec![unfolding_states; processes],
            log2_box_bound,
            exponent: size_exponent(n_actions),
        })
    }

    pub fn base_sizes_hold(&self) -> bool {
        self.rows[0].beta == 1 && self.rows.get(1).is_none_or(|r| r.tau == Some(1))
    }

    pub fn recurrence_holds(&self) -> bool {
        self.rows.iter().all(|r| match (r.tau, r.tau_bound) {
            (Some(t), Some(b)) => t as u128 <= b,
            _ => true,
        })
    }

    pub fn copies_hold(&self) -> bool {
        self.copies.iter().all(|c| c.copies as usize <= c.limit)
    }

    pub fn box_bound_holds(&self) -> bool {
        let top = self.rows.last().map_or(1, |r| r.beta);
        (top as f64).log2() <= self.log2_box_bound + 1e-9
    }

    pub fn local_states_hold(&self) -> bool {
        self.local_states
            .iter()
            .all(|&n| n == self.unfolding_states && (n as f64).log2() <= self.log2_box_bound + 1e-9)
    }

    pub fn all_hold(&self) -> bool {
        self.base_sizes_hold()
            && self.recurrence_holds()
            && self.copies_hold()
            && self.box_bound_holds()
            && self.local_states_hold()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "tau": r.tau,
                    "beta": r.beta,
                    "tau_bound": r.tau_bound.map(|b| b.to_string()),
                })
            })
            .collect();
        let copies: Vec<Value> = self
            .copies
            .iter()
            .map(|c| {
                json!({
                    "set": c.set,
                    "anchor": c.anchor,
                    "max_out_degree": c.max_out_degree,
                    "copies": c.copies,
                    "limit": c.limit,
                })
            })
            .collect();
        json!({
            "source_states": self.source_states,
            "actions": self.actions,
            "heights": rows,
            "connected_boxes": copies,
            "unfolding_states": self.unfolding_states,
            "local_states": self.local_states,
            "log2_box_bound": format!("{:.3}", self.log2_box_bound),
            "exponent": self.exponent.to_string(),
            "ok": self.all_hold(),
        })
    }

    pub fn to_text(&self) -> String {
        let flag = |ok: bool| if ok { "ok" } else { "FAIL" };
        let mut s = String::new();
        let _ = writeln!(
            s,
            "source: {} states, {} actions",
            self.source_states, self.actions
        );
        let _ = writeln!(
            s,
            "{:>3} {:>10} {:>10} {:>14}  check",
            "n", "tau", "beta", "tau bound"
        );
        for r in &self.rows {
            let tau = r.tau.map_or("-".to_string(), |t| t.to_string());
            let bound = r.tau_bound.map_or("-".to_string(), |b| b.to_string());
            let ok = match (r.n, r.tau, r.tau_bound) {
                (0, _, _) => r.beta == 1,
                (1, t, _) => t == Some(1),
                (_, Some(t), Some(b)) => t as u128 <= b,
                _ => true,
            };
            let _ = writeln!(
                s,
                "{:>3} {:>10} {:>10} {:>14}  {}",
                r.n,
                tau,
                r.beta,
                bound,
                flag(ok)
            );
        }
        for c in &self.copies {
            let _ = writeln!(
                s,
                "box {} at {}: max out-degree {}, {} copies, limit {}  {}",
                c.set,
                c.anchor,
                c.max_out_degree,
                c.copies,
                c.limit,
                flag(c.copies as usize <= c.limit)
            );
        }
        let _ = writeln!(
            s,
            "unfolding: {} states, log2 = {:.3}; box bound log2 = {:.3}  {}",
            self.unfolding_states,
            (self.unfolding_states as f64).log2(),
            self.log2_box_bound,
            flag(self.box_bound_holds())
        );
        let _ = writeln!(
            s,
            "local states per process: {:?}  {}",
            self.local_states,
            flag(self.local_states_hold())
        );
        let _ = writeln!(s, "polynomial exponent d = {}", self.exponent);
        s
    }
}
