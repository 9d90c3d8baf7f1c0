use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::parse::{parse_input, InputSpec};
use crate::foliation::FoliationGerm;
use crate::numeric::BiPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusField {
    pub name: String,
    pub spec: InputSpec,
}

fn field(name: &str, text: &str) -> CorpusField {
    CorpusField {
        name: name.into(),
        spec: parse_input(text).expect("corpus text parses"),
    }
}

/// The named fields: classical models, saddle-node normal forms, the
/// worked example and two extra centers and tangencies.
pub fn named_fields() -> Vec<CorpusField> {
    let mut out = vec![
        field("radial", "P = x; Q = y;"),
        field("linear-saddle", "P = x; Q = -y;"),
        field("center", "P = y; Q = -x;"),
        field("cusp", "P = 2*y; Q = 3*x^2;"),
    ];
    for k in 1..=3 {
        out.push(field(
            &format!("saddle-node-k{k}"),
            &format!("P = x^{}; Q = -y*(1 + x^{k});", k + 1),
        ));
    }
    out.push(field("example", "P = y^2 + x^4; Q = -x*y + x^5 + x*y^2;"));
    out.push(field("second-center", "P = y + x*(x^2 + y^2); Q = -(x - y*(x^2 + y^2));"));
    out.push(field("tangent-saddle-node", "P = x^2 + y^2; Q = x*y + y^2;"));
    out
}

fn random_poly(rng: &mut ChaCha8Rng, low: u32) -> BiPoly {
    let mut terms = Vec::new();
    for d in low..=3 {
        for i in 0..=d {
            if rng.gen_bool(0.4) {
                let c = loop {
                    let c: i64 = rng.gen_range(-3..=3);
                    if c != 0 {
                        break c;
                    }
                };
                terms.push((c, i, d - i));
            }
        }
    }
    BiPoly::from_int_terms(&terms)
}

/// `count` fields over the rationals with `P(0) = Q(0) = 0`, degree at most
/// three and an isolated singularity. Half of them start in degree two so
/// that the reduction needs blow-ups.
pub fn random_fields(seed: u64, count: usize) -> Vec<CorpusField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let low = if rng.gen_bool(0.5) { 1 } else { 2 };
        let (p, q) = (random_poly(&mut rng, low), random_poly(&mut rng, low));
        if p.is_zero() || q.is_zero() || FoliationGerm::new(p.clone(), q.clone()).is_err() {
            continue;
        }
        out.push(CorpusField {
            name: format!("random-{}", out.len()),
            spec: InputSpec::new(p, q),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shapes() {
        let named = named_fields();
        assert_eq!(named.len(), 10);
        assert!(named.iter().all(|f| f.spec.germ().is_ok()));
        let r = random_fields(7, 20);
        assert_eq!(r.len(), 20);
        assert_eq!(r, random_fields(7, 20));
        assert!(r.iter().all(|f| f.spec.p.total_degree().unwrap() <= 3));
    }
}
