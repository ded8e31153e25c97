use std::fmt;

use num_traits::{Signed, Zero};

use super::{FieldElement, FieldTower, Interval, NumFieldError, Rational};

const BASE_BITS: u32 = 64;

/// Which square root an ordering picks for a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootSign {
    Positive,
    Negative,
}

impl RootSign {
    pub fn symbol(self) -> char {
        match self {
            RootSign::Positive => '+',
            RootSign::Negative => '-',
        }
    }
}

/// A real embedding of a tower: one root sign per generator, certified by
/// enclosures of the embedded generators.
#[derive(Clone)]
pub struct Ordering {
    tower: FieldTower,
    root_signs: Vec<RootSign>,
    intervals: Vec<Interval>,
}

impl Ordering {
    /// The unique ordering of the rationals.
    pub fn rational(tower: &FieldTower) -> Self {
        assert_eq!(
            tower.depth(),
            0,
            "Ordering::rational needs the depth-zero tower"
        );
        Ordering {
            tower: tower.clone(),
            root_signs: Vec::new(),
            intervals: Vec::new(),
        }
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn root_signs(&self) -> &[RootSign] {
        &self.root_signs
    }

    /// The base-precision enclosures of the embedded generators.
    pub fn isolating_intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Extends this ordering to `ext`, one step above, choosing the sign of the new root.
    pub fn lift(&self, ext: &FieldTower, sign: RootSign) -> Result<Ordering, NumFieldError> {
        let parent = ext.parent().ok_or(NumFieldError::BaseTower)?;
        if parent != &self.tower {
            return Err(NumFieldError::MismatchedTower);
        }
        let radicand = ext.top_radicand().expect("depth > 0");
        if self.sign_of(&radicand)? <= 0 {
            return Err(NumFieldError::NotPositiveAnywhere(radicand.to_string()));
        }
        let mut root_signs = self.root_signs.clone();
        root_signs.push(sign);
        let intervals = generator_enclosures(ext, &root_signs, BASE_BITS);
        Ok(Ordering {
            tower: ext.clone(),
            root_signs,
            intervals,
        })
    }

    /// The restriction of this ordering to a subtower.
    pub fn restrict(&self, sub: &FieldTower) -> Result<Ordering, NumFieldError> {
        if !self.tower.is_extension_of(sub) {
            return Err(NumFieldError::MismatchedTower);
        }
        let depth = sub.depth();
        Ok(Ordering {
            tower: sub.clone(),
            root_signs: self.root_signs[..depth].to_vec(),
            intervals: self.intervals[..depth].to_vec(),
        })
    }

    /// True if this ordering restricts to `base` on `base`'s tower.
    pub fn extends(&self, base: &Ordering) -> bool {
        self.tower.is_extension_of(&base.tower)
            && self.root_signs[..base.root_signs.len()] == base.root_signs[..]
    }

    /// Exact sign of `x` under this embedding.
    pub fn sign_of(&self, x: &FieldElement) -> Result<i32, NumFieldError> {
        if x.tower() != &self.tower {
            return Err(NumFieldError::MismatchedTower);
        }
        if let Some(q) = x.as_rational() {
            return Ok(rational_sign(q));
        }
        if x.is_zero() {
            return Ok(0);
        }
        if let Some(s) = eval(x.coeffs(), &self.intervals).sign() {
            return Ok(s);
        }
        let mut bits = BASE_BITS * 2;
        loop {
            let refined = generator_enclosures(&self.tower, &self.root_signs, bits);
            if let Some(s) = eval(x.coeffs(), &refined).sign() {
                return Ok(s);
            }
            bits *= 2;
        }
    }

    /// Rational enclosure of the embedded value of `x` at the base precision.
    pub fn enclose(&self, x: &FieldElement) -> Result<Interval, NumFieldError> {
        if x.tower() != &self.tower {
            return Err(NumFieldError::MismatchedTower);
        }
        Ok(eval(x.coeffs(), &self.intervals))
    }

    /// Signs rendered as `[+,-,...]`.
    pub fn signs_label(&self) -> String {
        let parts: Vec<String> = self
            .root_signs
            .iter()
            .map(|s| s.symbol().to_string())
            .collect();
        format!("[{}]", parts.join(","))
    }
}

fn rational_sign(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Evaluates a power-product coefficient vector on generator enclosures.
fn eval(coeffs: &[Rational], gens: &[Interval]) -> Interval {
    if coeffs.len() == 1 {
        return Interval::point(coeffs[0].clone());
    }
    let half = coeffs.len() / 2;
    let depth = gens.len().min(half.trailing_zeros() as usize + 1);
    let (u, v) = coeffs.split_at(half);
    let low = eval(u, &gens[..depth - 1]);
    if v.iter().all(Zero::is_zero) {
        return low;
    }
    low.add(&eval(v, &gens[..depth - 1]).mul(&gens[depth - 1]))
}

fn generator_enclosures(tower: &FieldTower, signs: &[RootSign], bits: u32) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::with_capacity(signs.len());
    for (level, sign) in signs.iter().enumerate() {
        let radicand = eval(&tower.radicand_slices()[level], &out);
        let root = radicand.sqrt(bits);
        out.push(match sign {
            RootSign::Positive => root,
            RootSign::Negative => root.neg(),
        });
    }
    out
}

impl PartialEq for Ordering {
    fn eq(&self, other: &Self) -> bool {
        self.tower == other.tower && self.root_signs == other.root_signs
    }
}

impl Eq for Ordering {}

impl fmt::Debug for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordering{}", self.signs_label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact sign of `u + v*sqrt(a)` from the signs of `u`, `v` and `u^2 - a v^2`.
    fn algebraic_sign(x: &FieldElement, p: &Ordering) -> i32 {
        let tower = x.tower();
        if tower.depth() == 0 {
            return rational_sign(x.as_rational().unwrap());
        }
        let parent = tower.parent().unwrap();
        let pp = p.restrict(parent).unwrap();
        let (u, v) = x.split_step().unwrap();
        let su = algebraic_sign(&u, &pp);
        let root_sign = match p.root_signs()[tower.depth() - 1] {
            RootSign::Positive => 1,
            RootSign::Negative => -1,
        };
        let sv = algebraic_sign(&v, &pp) * root_sign;
        if su == sv || sv == 0 {
            return su;
        }
        if su == 0 {
            return sv;
        }
        let a = tower.top_radicand().unwrap();
        let disc = u.mul(&u).sub(&a.mul(&v).mul(&v));
        su * algebraic_sign(&disc, &pp)
    }

    #[test]
    fn spec_sign_examples() {
        let t = FieldTower::from_rational_radicands(&[2]).unwrap();
        let ords = t.orderings().unwrap();
        let pos = &ords[0];
        assert_eq!(pos.root_signs(), &[RootSign::Positive]);
        let r = t.generator(0);
        let one = FieldElement::one(&t);
        assert_eq!(pos.sign_of(&FieldElement::zero(&t)).unwrap(), 0);
        assert_eq!(pos.sign_of(&r.sub(&one)).unwrap(), 1);
        assert_eq!(pos.sign_of(&r.sub(&one.scale_int(2))).unwrap(), -1);
        assert_eq!(ords[1].sign_of(&r).unwrap(), -1);
    }

    #[test]
    fn close_values_need_refinement() {
        // 665857/470832 is a convergent of sqrt 2; the difference is about 1.6e-12
        let t = FieldTower::from_rational_radicands(&[2]).unwrap();
        let r = t.generator(0);
        let c = FieldElement::from_ratio(&t, 665857, 470832);
        let p = &t.orderings().unwrap()[0];
        assert_eq!(p.sign_of(&c.sub(&r)).unwrap(), 1);
        let x = r
            .sub(&c)
            .scale(&Rational::new(1.into(), (1i64 << 60).into()));
        assert_eq!(p.sign_of(&x).unwrap(), -1);
    }

    #[test]
    fn interval_sign_matches_algebraic_oracle() {
        let t = FieldTower::from_rational_radicands(&[2, 3]).unwrap();
        let gens = [
            FieldElement::one(&t),
            t.generator(0),
            t.generator(1),
            t.generator(0).mul(&t.generator(1)),
        ];
        let ords = t.orderings().unwrap();
        let mut count = 0;
        for c0 in -3i64..=3 {
            for c1 in -2i64..=2 {
                for c2 in -2i64..=2 {
                    for c3 in -1i64..=1 {
                        let x = gens[0]
                            .scale_int(c0)
                            .add(&gens[1].scale_int(c1))
                            .add(&gens[2].scale_int(c2))
                            .add(&gens[3].scale_int(c3));
                        for p in &ords {
                            assert_eq!(
                                p.sign_of(&x).unwrap(),
                                algebraic_sign(&x, p),
                                "{x} at {p:?}"
                            );
                            count += 1;
                        }
                    }
                }
            }
        }
        assert!(count > 1000);
    }

    #[test]
    fn mismatched_tower_rejected() {
        let t = FieldTower::from_rational_radicands(&[2]).unwrap();
        let p = &FieldTower::rationals().orderings().unwrap()[0];
        assert_eq!(
            p.sign_of(&t.generator(0)),
            Err(NumFieldError::MismatchedTower)
        );
    }

    #[test]
    fn lifted_orderings_keep_radicands_positive() {
        let t = FieldTower::from_rational_radicands(&[2]).unwrap();
        let t2 = t
            .extend(&t.generator(0).sub(&FieldElement::one(&t)))
            .unwrap();
        for p in t2.orderings().unwrap() {
            for level in 0..t2.depth() {
                let a = t2.radicand(level);
                let sub = p.restrict(a.tower()).unwrap();
                assert_eq!(sub.sign_of(&a).unwrap(), 1);
            }
        }
    }
}
