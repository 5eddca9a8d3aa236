//! Nilpotency degree `d` and zero exponent `c`.

use serde::Serialize;

use crate::semigroup::{ElementId, FiniteSemigroup};

/// Which part of the semigroup the profile describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfiledPart {
    /// The whole semigroup.
    Whole,
    /// `S ∖ {1}` of a monoid whose non-identity part is a subsemigroup.
    NonIdentity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NilpotentProfile {
    pub part: ProfiledPart,
    /// Least `d` such that all `d`-fold products coincide; `None` if not nilpotent.
    pub d: Option<usize>,
    /// Least `c` with `x^c = 0` for every element of the profiled part.
    pub c: Option<usize>,
}

impl NilpotentProfile {
    pub fn is_nilpotent(&self) -> bool {
        self.d.is_some()
    }
}

impl std::fmt::Display for NilpotentProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let part = match self.part {
            ProfiledPart::Whole => "S",
            ProfiledPart::NonIdentity => "S\\{1}",
        };
        match (self.d, self.c) {
            (Some(d), Some(c)) => write!(f, "{part}: d={d}, c={c}"),
            _ => write!(f, "{part}: not nilpotent"),
        }
    }
}

/// Profile of `S`, or of `S ∖ {1}` when `S` is a nontrivial monoid whose
/// non-identity elements form a subsemigroup.
pub fn nilpotency_profile(s: &FiniteSemigroup) -> NilpotentProfile {
    if s.order() == 1 {
        return NilpotentProfile {
            part: ProfiledPart::Whole,
            d: Some(1),
            c: Some(1),
        };
    }
    let (part, base): (ProfiledPart, Vec<ElementId>) = match s.identity() {
        Some(one) if non_identity_closed(s, one) => (
            ProfiledPart::NonIdentity,
            s.elements().filter(|&e| e != one).collect(),
        ),
        _ => (ProfiledPart::Whole, s.elements().collect()),
    };
    let (d, zero) = match degree(s, &base) {
        Some(v) => v,
        None => {
            return NilpotentProfile {
                part,
                d: None,
                c: None,
            }
        }
    };
    let c = (1..=d).find(|&c| base.iter().all(|&x| s.pow(x, c) == Some(zero)));
    NilpotentProfile { part, d: Some(d), c }
}

fn non_identity_closed(s: &FiniteSemigroup, one: ElementId) -> bool {
    s.elements()
        .filter(|&e| e != one)
        .all(|a| s.elements().filter(|&e| e != one).all(|b| s.mul(a, b) != one))
}

/// Least `d` with `|base^d| = 1`, together with that single product.
fn degree(s: &FiniteSemigroup, base: &[ElementId]) -> Option<(usize, ElementId)> {
    let mut member = vec![false; s.order()];
    let mut current: Vec<ElementId> = base.to_vec();
    let mut d = 1;
    loop {
        if current.len() == 1 {
            return Some((d, current[0]));
        }
        member.iter_mut().for_each(|m| *m = false);
        let mut next = Vec::new();
        for &p in &current {
            for &x in base {
                let q = s.mul(p, x);
                if !member[q.index()] {
                    member[q.index()] = true;
                    next.push(q);
                }
            }
        }
        if next.len() >= current.len() {
            // products of length d+1 lie inside products of length d; no shrink means a fixed point
            return None;
        }
        current = next;
        d += 1;
    }
}
