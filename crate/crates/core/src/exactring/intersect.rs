//! Local intersection numbers `λ(R/(f, g))` of two plane curves at the
//! origin, by Fulton's algorithm.

use super::field::Field;
use super::poly::Poly;

/// Step budget before giving up.
const MAX_STEPS: usize = 1_000_000;

/// Outcome of [`intersection_number`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Intersection {
    Finite(usize),
    /// `f` and `g` share a component through the origin.
    Infinite,
    /// The step budget ran out.
    Exhausted,
}

/// `dim_k k[x,y]_(x,y)/(f, g)`.
pub fn intersection_number<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Intersection {
    let mut total = 0usize;
    // Pending pairs; each contributes additively.
    let mut stack = vec![(f.clone(), g.clone())];
    let mut steps = 0;
    while let Some((mut f, mut g)) = stack.pop() {
        loop {
            steps += 1;
            if steps > MAX_STEPS {
                return Intersection::Exhausted;
            }
            if f.is_zero() || g.is_zero() {
                return Intersection::Infinite;
            }
            if !f.constant_term().is_zero() || !g.constant_term().is_zero() {
                break;
            }
            if divisible_by_x(&f) && divisible_by_x(&g) {
                return Intersection::Infinite;
            }
            let (fx, gx) = (f.restrict_y0(), g.restrict_y0());
            let (r, s) = (poly_degree(&fx), poly_degree(&gx));
            match (r, s) {
                (None, None) => return Intersection::Infinite,
                (None, Some(_)) | (Some(_), None) => {
                    // One of them is y*h: I(y*h, g) = ord_x g(x,0) + I(h, g).
                    if r.is_some() {
                        std::mem::swap(&mut f, &mut g);
                    }
                    let gx = g.restrict_y0();
                    total += gx.iter().position(|c| !c.is_zero()).expect("nonzero restriction");
                    let h = f.div_y().expect("y divides f");
                    stack.push((h, g));
                    break;
                }
                (Some(r), Some(s)) => {
                    if r > s {
                        std::mem::swap(&mut f, &mut g);
                    }
                    let (lo, hi) = (r.min(s), r.max(s));
                    let fx = f.restrict_y0();
                    let gx = g.restrict_y0();
                    let lf = fx[lo].clone();
                    let lg = gx[hi].clone();
                    g = &g.scale(&lf) - &f.shift((hi - lo) as u32, 0).scale(&lg);
                }
            }
        }
    }
    Intersection::Finite(total)
}

fn divisible_by_x<F: Field>(f: &Poly<F>) -> bool {
    f.terms().all(|(&(a, _), _)| a > 0)
}

fn poly_degree<F: Field>(v: &[F]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}
