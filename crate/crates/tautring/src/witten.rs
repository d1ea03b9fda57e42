//! Exact psi-intersection numbers ⟨τ_{d1}⋯τ_{dn}⟩_g via the string and
//! dilaton equations and the DVV form of the Virasoro constraints, with a
//! shared memo table. Every value computed with n ≥ 2 is cross-checked
//! against a second reduction route before it is cached.

use crate::error::{Error, Result};
use crate::rat::{format_rat, int, odd_double_factorial, parse_rat, rat, Rat};
use dashmap::DashMap;
use num_traits::Zero;
use once_cell::sync::Lazy;
use std::io::{BufRead, Write};
use std::path::Path;

static MEMO: Lazy<DashMap<(u32, Vec<u32>), Rat>> = Lazy::new(DashMap::new);

fn sorted(exps: &[u32]) -> Vec<u32> {
    let mut v = exps.to_vec();
    v.sort_unstable();
    v
}

fn stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

/// ∫ over the (g, n) space of ψ1^{d1}⋯ψn^{dn}; zero when the total degree
/// misses the dimension.
pub fn tau(g: u32, exps: &[u32]) -> Result<Rat> {
    if !stable(g, exps.len()) {
        return Err(Error::UnstableSpace {
            g,
            n: exps.len() as u32,
        });
    }
    Ok(tau_inner(g, &sorted(exps)))
}

/// Like `tau` but returns 0 for unstable input; used inside recursions
/// where unstable splittings simply do not contribute.
fn tau_opt(g: u32, exps: &[u32]) -> Rat {
    if !stable(g, exps.len()) {
        return Rat::zero();
    }
    tau_inner(g, &sorted(exps))
}

fn tau_inner(g: u32, exps: &[u32]) -> Rat {
    debug_assert!(exps.windows(2).all(|w| w[0] <= w[1]));
    let n = exps.len();
    let dim = 3 * g as i64 - 3 + n as i64;
    if exps.iter().map(|&d| d as i64).sum::<i64>() != dim {
        return Rat::zero();
    }
    let key = (g, exps.to_vec());
    if let Some(hit) = MEMO.get(&key) {
        return hit.clone();
    }
    // Base cases.
    if g == 0 && exps == [0, 0, 0] {
        let one = int(1);
        MEMO.insert(key, one.clone());
        return one;
    }
    if g == 1 && exps == [1] {
        let v = rat(1, 24);
        MEMO.insert(key, v.clone());
        return v;
    }
    let value = if exps[0] == 0 {
        reduce_string(g, exps)
    } else if exps[0] == 1 {
        reduce_dilaton(g, exps)
    } else {
        reduce_dvv(g, exps, n - 1)
    };
    // Cross-validation: recompute through an independent reduction route.
    if n >= 2 {
        let alt = if *exps.last().unwrap() >= 2 {
            if exps[0] <= 1 {
                Some(reduce_dvv(g, exps, n - 1))
            } else {
                Some(reduce_dvv(g, exps, n - 2))
            }
        } else if exps[0] == 0 && exps[n - 1] == 1 {
            Some(reduce_dilaton(g, exps))
        } else {
            None
        };
        if let Some(alt) = alt {
            assert_eq!(
                value, alt,
                "route disagreement for <tau>_{g} at {exps:?}: {value} vs {alt}"
            );
        }
    }
    MEMO.insert(key, value.clone());
    value
}

/// String equation: remove a τ0, decrement each other exponent in turn.
fn reduce_string(g: u32, exps: &[u32]) -> Rat {
    debug_assert_eq!(exps[0], 0);
    let rest = &exps[1..];
    let mut acc = Rat::zero();
    for j in 0..rest.len() {
        if rest[j] >= 1 {
            let mut dec = rest.to_vec();
            dec[j] -= 1;
            acc += tau_opt(g, &dec);
        }
    }
    acc
}

/// Dilaton equation: remove a τ1, scale by 2g - 2 + n.
fn reduce_dilaton(g: u32, exps: &[u32]) -> Rat {
    let pos = exps.iter().position(|&d| d == 1).expect("a unit exponent");
    let mut rest = exps.to_vec();
    rest.remove(pos);
    int(2 * g as i64 - 2 + rest.len() as i64) * tau_opt(g, &rest)
}

/// DVV recursion applied to the exponent at position `at`, with the
/// genus-reduction and all stable splitting terms each weighted 1/2.
fn reduce_dvv(g: u32, exps: &[u32], at: usize) -> Rat {
    let d0 = exps[at] as i64;
    let rest: Vec<u32> = exps
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != at)
        .map(|(_, &d)| d)
        .collect();
    let m = rest.len();
    let mut acc = Rat::zero();
    // Joining terms.
    for j in 0..m {
        let dj = rest[j] as i64;
        let mut joined = rest.clone();
        joined[j] = (d0 + dj - 1) as u32;
        let coeff = Rat::new(
            odd_double_factorial(d0 + dj - 1),
            odd_double_factorial(dj - 1),
        );
        acc += coeff * tau_opt(g, &joined);
    }
    // Genus reduction and splittings, each weighted 1/2.
    let mut lower = Rat::zero();
    for a in 0..=(d0 - 2).max(-1) {
        let b = d0 - 2 - a;
        if b < 0 {
            continue;
        }
        let coeff =
            Rat::from_integer(odd_double_factorial(a) * odd_double_factorial(b));
        let mut contribution = Rat::zero();
        if g >= 1 {
            let mut with = rest.clone();
            with.push(a as u32);
            with.push(b as u32);
            contribution += tau_opt(g - 1, &with);
        }
        for g1 in 0..=g {
            let g2 = g - g1;
            for mask in 0..(1u32 << m) {
                let mut left = vec![a as u32];
                let mut right = vec![b as u32];
                for (j, &d) in rest.iter().enumerate() {
                    if mask & (1 << j) != 0 {
                        left.push(d);
                    } else {
                        right.push(d);
                    }
                }
                if !stable(g1, left.len()) || !stable(g2, right.len()) {
                    continue;
                }
                contribution += tau_opt(g1, &left) * tau_opt(g2, &right);
            }
        }
        lower += coeff * contribution;
    }
    acc += lower * rat(1, 2);
    acc / Rat::from_integer(odd_double_factorial(d0))
}

/// Clears the memo table (benchmark hook).
pub fn clear_memo() {
    MEMO.clear();
}

/// Number of memoized values (diagnostics).
pub fn memo_len() -> usize {
    MEMO.len()
}

pub fn memo_snapshot() -> Vec<((u32, Vec<u32>), Rat)> {
    let mut entries: Vec<_> = MEMO
        .iter()
        .map(|kv| (kv.key().clone(), kv.value().clone()))
        .collect();
    entries.sort_by(|a, b| a.0.cmp(&b.0));
    entries
}

/// Writes the memo table as lines `g;d1,d2,... p/q`.
pub fn save_cache(path: &Path) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    for ((g, exps), value) in memo_snapshot() {
        let ds = exps
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(",");
        writeln!(file, "{g};{ds} {}", format_rat(&value))?;
    }
    Ok(())
}

/// Loads previously computed values; malformed lines are rejected.
pub fn load_cache(path: &Path) -> Result<usize> {
    let file = std::fs::File::open(path)?;
    let mut loaded = 0usize;
    for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = || -> Option<((u32, Vec<u32>), Rat)> {
            let (key, val) = line.split_once(' ')?;
            let (g, ds) = key.split_once(';')?;
            let g: u32 = g.trim().parse().ok()?;
            let exps: Vec<u32> = if ds.trim().is_empty() {
                Vec::new()
            } else {
                ds.split(',').map(|d| d.trim().parse().ok()).collect::<Option<_>>()?
            };
            Some(((g, sorted(&exps)), parse_rat(val)?))
        };
        match parse() {
            Some((key, value)) => {
                MEMO.insert(key, value);
                loaded += 1;
            }
            None => {
                return Err(Error::Parse {
                    pos: lineno + 1,
                    msg: format!("bad cache line: {line}"),
                })
            }
        }
    }
    Ok(loaded)
}
