use super::brackets::{ratio_test, rcb_coeffs, rcb_qseries};
use super::covariance::{covariance_trials, Family};
use super::modular::express_in_modular_basis;
use super::qseries::{delta_qexp, eisenstein_qexp, int, rational_string, QSeries};
use crate::report::Check;
use crate::{rng, Exec, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RcbConfig {
    /// q-expansion order N
    pub order: usize,
    /// largest bracket order for closure and covariance
    pub j_max: u32,
    /// random (gamma, z) draws per bracket order
    pub trials: usize,
    pub family: Family,
    pub cov_tol: f64,
    /// ratio test range: 1 <= j <= ratio_j, 2 <= k1, k2 <= ratio_k
    pub ratio_j: u32,
    pub ratio_k: i64,
    pub seed: u64,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for RcbConfig {
    fn default() -> Self {
        Self {
            order: 50,
            j_max: 4,
            trials: 50,
            family: Family::Exp,
            cov_tol: 1e-9,
            ratio_j: 6,
            ratio_k: 10,
            seed: rng::DEFAULT_SEED,
            exec: Exec::default(),
        }
    }
}

fn push(out: &mut Vec<Check>, name: &str, r: Result<(bool, String)>) {
    out.push(match r {
        Ok((ok, d)) => Check::boolean(name, ok).with_detail(d),
        Err(e) => Check::errored(name, 0.0, e),
    });
}

pub fn run(cfg: &RcbConfig) -> Vec<Check> {
    let mut out = Vec::new();
    let n = cfg.order;

    push(&mut out, "F1(E4,E6)=3456*Delta", (|| {
        let f = rcb_qseries(&eisenstein_qexp(4, n)?, &eisenstein_qexp(6, n)?, 1)?;
        let want = delta_qexp(n).scale(&int(3456));
        let ok = f == want;
        let spot = |k: usize| if k <= n { rational_string(f.coeff(k)) } else { "-".into() };
        Ok((ok, format!("through q^{n}; q^1={} q^2={}", spot(1), spot(2))))
    })());

    push(&mut out, "modular closure of F_j(E4|E6, E4|E6)", (|| {
        let forms = [eisenstein_qexp(4, n)?, eisenstein_qexp(6, n)?];
        let mut count = 0;
        for j in 0..=cfg.j_max {
            for f in &forms {
                for g in &forms {
                    let b = rcb_qseries(f, g, j)?;
                    if b.is_zero() {
                        continue;
                    }
                    let e = express_in_modular_basis(&b)?;
                    if e.weight != f.weight() + g.weight() + 2 * j as i64 {
                        return Ok((false, format!("weight {} for j={j}", e.weight)));
                    }
                    count += 1;
                }
            }
        }
        Ok((true, format!("{count} brackets, j <= {}, zero residual through q^{n}", cfg.j_max)))
    })());

    push(&mut out, "F_j(f,f) = 0 for odd j", (|| {
        let e4 = eisenstein_qexp(4, n.min(20))?;
        let e6 = eisenstein_qexp(6, n.min(20))?;
        let mut ok = true;
        for j in (1..=9).step_by(2) {
            ok &= rcb_qseries(&e4, &e4, j)?.is_zero() && rcb_qseries(&e6, &e6, j)?.is_zero();
        }
        Ok((ok, "j = 1, 3, ..., 9".into()))
    })());

    push(&mut out, "rcb coefficient antisymmetry", (|| {
        let mut ok = true;
        for k in 1..=10 {
            for j in 0..=9i64 {
                let c = rcb_coeffs(k, k, j)?;
                let sign = if j % 2 == 0 { int(1) } else { int(-1) };
                ok &= (0..=j as usize).all(|l| c[l] == &c[j as usize - l] * &sign);
            }
        }
        Ok((ok, String::new()))
    })());

    push(&mut out, "generalized / classical coefficient ratio", (|| {
        let mut worst = None;
        for j in 1..=cfg.ratio_j {
            for k1 in 2..=cfg.ratio_k {
                for k2 in 2..=cfg.ratio_k {
                    let t = ratio_test(k1, k2, j)?;
                    if !t.matches_expected && worst.is_none() {
                        worst = Some(format!("fails at k1={k1} k2={k2} j={j}"));
                    }
                }
            }
        }
        let ok = worst.is_none();
        Ok((ok, worst.unwrap_or_else(|| format!("constant = (-1)^j j!/((k1)_j (k2)_j) for j <= {}, k <= {}", cfg.ratio_j, cfg.ratio_k))))
    })());

    out.push(match covariance_trials(cfg.j_max, cfg.trials, cfg.family, cfg.seed, cfg.exec) {
        Ok(t) => {
            let worst = t.iter().map(|x| x.residual).fold(0.0, f64::max);
            Check::measured("F_j covariance under the slash action", worst, cfg.cov_tol)
                .with_detail(format!("{} draws, j <= {}", t.len(), cfg.j_max))
        }
        Err(e) => Check::errored("F_j covariance under the slash action", cfg.cov_tol, e),
    });

    push(&mut out, "weight bookkeeping k1+k2+2j", (|| {
        let e4 = eisenstein_qexp(4, 5)?;
        let d = delta_qexp(5);
        let ok = (0..=6).all(|j| rcb_qseries(&e4, &d, j).map(|s: QSeries| s.weight() == 16 + 2 * j as i64).unwrap_or(false));
        Ok((ok, String::new()))
    })());

    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suite_passes() {
        let cfg = RcbConfig { order: 20, trials: 5, ..Default::default() };
        for c in run(&cfg) {
            assert!(c.passed(), "{c:?}");
        }
    }
}
