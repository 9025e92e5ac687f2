//! Seeded instance generators.

use super::instance::{parse_instance, Instance};
use crate::exactlin::PrimeField;
use crate::graded::{GradedRing, HomogeneousIdeal, Poly};
use crate::resolution::grade;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Homogeneous forms verified to have grade `n` in a polynomial ring.
    RegularSequence,
    /// `(x^a)` in `k[x]/(x^b)`.
    PowerInHypersurface,
    /// Random forms and monomials over a polynomial ring or a quotient by one relation.
    RandomHomogeneous,
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "regular-sequence" => Ok(Family::RegularSequence),
            "power-in-hypersurface" => Ok(Family::PowerInHypersurface),
            "random-homogeneous" => Ok(Family::RandomHomogeneous),
            _ => Err(format!(
                "unknown family '{s}' (regular-sequence, power-in-hypersurface, random-homogeneous)"
            )),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::RegularSequence => "regular-sequence",
            Family::PowerInHypersurface => "power-in-hypersurface",
            Family::RandomHomogeneous => "random-homogeneous",
        })
    }
}

/// Optional knobs; unset values are drawn from the seed.
#[derive(Clone, Copy, Debug, Default)]
pub struct GenParams {
    pub nvars: Option<usize>,
    pub count: Option<usize>,
    pub max_degree: Option<u32>,
    pub a: Option<u32>,
    pub b: Option<u32>,
}

const VAR_NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];

fn exponent_vectors(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(v: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if v + 1 == cur.len() {
            cur[v] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[v] = e;
            rec(v + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

fn random_form(rng: &mut ChaCha8Rng, nvars: usize, d: u32) -> Poly {
    loop {
        let mut p = Poly::zero();
        for m in exponent_vectors(nvars, d) {
            if rng.gen_bool(0.6) {
                p.add_term(m, rng.gen_range(-3..=3));
            }
        }
        if !p.is_zero() {
            return p;
        }
    }
}

fn random_monomial(rng: &mut ChaCha8Rng, nvars: usize, d: u32) -> Poly {
    let all = exponent_vectors(nvars, d);
    Poly::monomial(all.choose(rng).unwrap().clone(), 1)
}

fn render(names: &[String], polys: &[Poly]) -> String {
    let parts: Vec<String> = polys.iter().map(|p| p.display(names).to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn header(nvars: usize) -> (Vec<String>, String) {
    let names: Vec<String> = VAR_NAMES[..nvars].iter().map(|s| s.to_string()).collect();
    let vars: Vec<String> = names.iter().map(|n| format!("{n}:1")).collect();
    (names, format!("char: 101\nvars: {}\n", vars.join(", ")))
}

/// Cyclic module `Q/(I + (ℓ))` for a variable `ℓ`, in instance syntax.
fn cyclic_module(names: &[String], ideal: &[Poly], extra: Poly) -> String {
    let mut row = ideal.to_vec();
    row.push(extra);
    format!("module M:\n  twists: [0]\n  relations:\n  {}\n", render(names, &row))
}

fn var(nvars: usize, v: usize) -> Poly {
    let mut e = vec![0; nvars];
    e[v] = 1;
    Poly::monomial(e, 1)
}

/// A deterministic instance of `family` from `seed`.
pub fn generate_instance(family: Family, params: GenParams, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let f = PrimeField::new(101).unwrap();
    let text = match family {
        Family::PowerInHypersurface => {
            let b = params.b.unwrap_or_else(|| rng.gen_range(2..=6));
            let a = params.a.unwrap_or_else(|| rng.gen_range(1..b));
            format!("char: 101\nvars: x:1\nbase_relations: [x^{b}]\nideal: [x^{a}]\n")
        }
        Family::RegularSequence => {
            let nvars = params.nvars.unwrap_or_else(|| rng.gen_range(2..=3));
            let n = params.count.unwrap_or_else(|| rng.gen_range(1..=nvars)).min(nvars);
            let maxd = params.max_degree.unwrap_or(2);
            let (names, head) = header(nvars);
            let q: Arc<GradedRing> = GradedRing::new(f, names_to_vars(&names), Vec::new()).unwrap();
            let gens = loop {
                let gens: Vec<Poly> = (0..n)
                    .map(|_| {
                        let d = rng.gen_range(1..=maxd);
                        random_form(&mut rng, nvars, d)
                    })
                    .collect();
                let ideal = HomogeneousIdeal::new(q.clone(), gens.clone()).unwrap();
                if ideal.check_minimality().minimal && grade(&ideal, 40) == n {
                    break gens;
                }
            };
            let mut text = format!("{head}ideal: {}\n", render(&names, &gens));
            if rng.gen_bool(0.5) {
                let ell = var(nvars, rng.gen_range(0..nvars));
                text.push_str(&cyclic_module(&names, &gens, ell));
            }
            text
        }
        Family::RandomHomogeneous => {
            let nvars = params.nvars.unwrap_or_else(|| rng.gen_range(1..=3));
            let maxd = params.max_degree.unwrap_or(3);
            let (names, mut text) = header(nvars);
            let base: Vec<Poly> = if rng.gen_bool(0.5) {
                let d = rng.gen_range(2..=maxd);
                vec![if rng.gen_bool(0.5) { random_monomial(&mut rng, nvars, d) } else { random_form(&mut rng, nvars, d) }]
            } else {
                Vec::new()
            };
            let q = GradedRing::new(f, names_to_vars(&names), base.clone()).unwrap();
            let count = params.count.unwrap_or_else(|| rng.gen_range(1..=2));
            let raw: Vec<Poly> = (0..count)
                .map(|_| {
                    let d = rng.gen_range(2..=maxd);
                    if rng.gen_bool(0.5) {
                        random_monomial(&mut rng, nvars, d)
                    } else {
                        random_form(&mut rng, nvars, d)
                    }
                })
                .collect();
            let ideal = HomogeneousIdeal::new(q, raw).unwrap().minimize();
            let gens = ideal.gens().to_vec();
            if !base.is_empty() {
                text.push_str(&format!("base_relations: {}\n", render(&names, &base)));
            }
            text.push_str(&format!("ideal: {}\n", render(&names, &gens)));
            if rng.gen_bool(0.5) {
                let ell = var(nvars, rng.gen_range(0..nvars));
                text.push_str(&cyclic_module(&names, &gens, ell));
            }
            text
        }
    };
    parse_instance(&text).expect("generated instances are well formed")
}

fn names_to_vars(names: &[String]) -> Vec<crate::graded::Variable> {
    names
        .iter()
        .map(|n| crate::graded::Variable {
            name: n.clone(),
            degree: 1,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        for fam in [Family::RegularSequence, Family::PowerInHypersurface, Family::RandomHomogeneous] {
            for seed in 0..5 {
                let a = generate_instance(fam, GenParams::default(), seed);
                let b = generate_instance(fam, GenParams::default(), seed);
                assert_eq!(a.canonical_text(), b.canonical_text());
            }
        }
    }

    #[test]
    fn regular_sequences_have_full_grade() {
        let p = GenParams {
            nvars: Some(3),
            count: Some(2),
            ..Default::default()
        };
        let inst = generate_instance(Family::RegularSequence, p, 11);
        let b = inst.build(inst.field()).unwrap();
        assert_eq!(b.ideal.len(), 2);
        assert_eq!(grade(&b.ideal, 40), 2);
    }

    #[test]
    fn power_in_hypersurface_params() {
        let p = GenParams {
            a: Some(2),
            b: Some(3),
            ..Default::default()
        };
        let inst = generate_instance(Family::PowerInHypersurface, p, 0);
        assert_eq!(inst.canonical_text(), "char: 101\nvars: x:1\nbase_relations: [x^3]\nideal: [x^2]\n");
    }

    #[test]
    fn family_names() {
        for fam in [Family::RegularSequence, Family::PowerInHypersurface, Family::RandomHomogeneous] {
            assert_eq!(fam.to_string().parse::<Family>(), Ok(fam));
        }
    }
}
