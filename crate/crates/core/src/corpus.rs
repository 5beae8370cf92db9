//! Generated test structures.
//!
//! Everything is assembled from a handful of blocks by direct sums and
//! tensor products and then moved by random real rational automorphisms:
//!
//! * the two-dimensional Hodge–Tate family `F¹ = span(e₂ + λe₀)`, with
//!   `W₀ = span(e₀)`, `W₂ = V` and `N e₂ = e₀`;
//! * a Jordan block of size `r + 1` on a pure weight `r`, with limit of
//!   Hodge–Tate type;
//! * a pure weight one block with `F¹ = span(e₀ + i e₁)` and `N = 0`;
//! * Hodge–Tate lines.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::{Endo, Exact, Gq, Matrix, Scalar, Subspace};
use crate::mhs::{DecFiltration, IncFiltration, PolarizationSystem};
use crate::record::Record;

pub type CorpusRng = ChaCha8Rng;

pub fn rng(seed: u64) -> CorpusRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit(n: usize, i: usize) -> Vec<Gq> {
    (0..n).map(|j| Gq::int((i == j) as i64)).collect()
}

fn inc(n: usize, gens: BTreeMap<i32, Vec<Vec<Gq>>>) -> IncFiltration<Gq> {
    IncFiltration::from_generators(n, &gens, Exact).expect("block filtration")
}

fn dec(n: usize, gens: BTreeMap<i32, Vec<Vec<Gq>>>) -> DecFiltration<Gq> {
    DecFiltration::from_generators(n, &gens, Exact).expect("block filtration")
}

/// The two-dimensional Hodge–Tate example; basis `(e₀, e₂)`.
pub fn hodge_tate_pair(lambda: Gq) -> Record<Gq> {
    let e0 = unit(2, 0);
    let e2 = unit(2, 1);
    let top = vec![e2[0].add(&lambda), e2[1].clone()];
    Record {
        f: dec(2, BTreeMap::from([(1, vec![top]), (0, vec![e0.clone()])])),
        w: inc(2, BTreeMap::from([(0, vec![e0.clone()]), (2, vec![e2.clone()])])),
        pol: PolarizationSystem {
            hodge_numbers: BTreeMap::from([((0, 0), 1), ((1, 1), 1)]),
            lifts: BTreeMap::from([(0, vec![e0]), (2, vec![e2])]),
            forms: BTreeMap::from([(0, Matrix::identity(1)), (2, Matrix::identity(1))]),
        },
        n: Some(Matrix::unit(2, 0, 1)),
    }
}

/// Jordan block `N a_i = a_{i+1}` on `a_0, …, a_r`, pure of weight `r`,
/// with `F^p = span(a_0, …, a_{r-p})` and `S(a_i, a_{r-i}) = (-1)^i`.
pub fn sl2_string(r: usize) -> Record<Gq> {
    let d = r + 1;
    let mut n = Matrix::zeros(d, d);
    for i in 0..r {
        n[(i + 1, i)] = Gq::int(1);
    }
    let mut s = Matrix::zeros(d, d);
    for i in 0..d {
        s[(i, r - i)] = Gq::int(if i % 2 == 0 { 1 } else { -1 });
    }
    let gens = (0..d).map(|i| ((r - i) as i32, vec![unit(d, i)])).collect();
    let mut hodge = BTreeMap::new();
    for p in 0..=r as i32 {
        *hodge.entry((p, r as i32 - p)).or_insert(0) += 1;
    }
    Record {
        f: dec(d, gens),
        w: IncFiltration::pure(d, r as i32),
        pol: PolarizationSystem {
            hodge_numbers: hodge,
            lifts: BTreeMap::from([(r as i32, (0..d).map(|i| unit(d, i)).collect())]),
            forms: BTreeMap::from([(r as i32, s)]),
        },
        n: Some(n),
    }
}

/// Pure weight one, `F¹ = span(e₀ + i e₁)`, `S = [[0, 1], [-1, 0]]`, `N = 0`.
pub fn weight_one_block() -> Record<Gq> {
    let v = vec![Gq::int(1), Gq::i()];
    Record {
        f: dec(2, BTreeMap::from([(1, vec![v]), (0, vec![unit(2, 0)])])),
        w: IncFiltration::pure(2, 1),
        pol: PolarizationSystem {
            hodge_numbers: BTreeMap::from([((1, 0), 1), ((0, 1), 1)]),
            lifts: BTreeMap::from([(1, vec![unit(2, 0), unit(2, 1)])]),
            forms: BTreeMap::from([(1, Matrix::from_i64_rows(&[&[0, 1], &[-1, 0]]))]),
        },
        n: Some(Matrix::zeros(2, 2)),
    }
}

/// A line of type `(p, p)` with `S = [1]`.
pub fn hodge_tate_line(p: i32) -> Record<Gq> {
    Record {
        f: dec(1, BTreeMap::from([(p, vec![unit(1, 0)])])),
        w: IncFiltration::pure(1, 2 * p),
        pol: PolarizationSystem {
            hodge_numbers: BTreeMap::from([((p, p), 1)]),
            lifts: BTreeMap::from([(2 * p, vec![unit(1, 0)])]),
            forms: BTreeMap::from([(2 * p, Matrix::identity(1))]),
        },
        n: Some(Matrix::zeros(1, 1)),
    }
}

fn block_diag(a: &Matrix<Gq>, b: &Matrix<Gq>) -> Matrix<Gq> {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut m = Matrix::zeros(ra + rb, ca + cb);
    for i in 0..ra {
        for j in 0..ca {
            m[(i, j)] = a[(i, j)].clone();
        }
    }
    for i in 0..rb {
        for j in 0..cb {
            m[(ra + i, ca + j)] = b[(i, j)].clone();
        }
    }
    m
}

pub fn kron(a: &Matrix<Gq>, b: &Matrix<Gq>) -> Matrix<Gq> {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut m = Matrix::zeros(ra * rb, ca * cb);
    for i in 0..ra {
        for j in 0..ca {
            if a[(i, j)].is_exact_zero() {
                continue;
            }
            for k in 0..rb {
                for l in 0..cb {
                    m[(i * rb + k, j * cb + l)] = a[(i, j)].mul(&b[(k, l)]);
                }
            }
        }
    }
    m
}

fn kron_vec(u: &[Gq], v: &[Gq]) -> Vec<Gq> {
    u.iter().flat_map(|a| v.iter().map(move |b| a.mul(b))).collect()
}

fn pad(v: &[Gq], before: usize, after: usize) -> Vec<Gq> {
    let mut out = vec![Gq::int(0); before];
    out.extend(v.iter().cloned());
    out.extend(std::iter::repeat_n(Gq::int(0), after));
    out
}

fn merge_forms(
    a: &BTreeMap<i32, Matrix<Gq>>,
    b: &BTreeMap<i32, Matrix<Gq>>,
) -> BTreeMap<i32, Matrix<Gq>> {
    let mut out = a.clone();
    for (k, m) in b {
        let merged = match out.get(k) {
            Some(x) => block_diag(x, m),
            None => m.clone(),
        };
        out.insert(*k, merged);
    }
    out
}

pub fn direct_sum(a: &Record<Gq>, b: &Record<Gq>) -> Result<Record<Gq>> {
    let (na, nb) = (a.dim(), b.dim());
    let n = na + nb;
    let embed_a = |v: &Vec<Gq>| pad(v, 0, nb);
    let embed_b = |v: &Vec<Gq>| pad(v, na, 0);
    let sum_steps = |sa: Subspace<Gq>, sb: Subspace<Gq>| -> Result<Subspace<Gq>> {
        let mut vs: Vec<Vec<Gq>> = sa.basis().iter().map(embed_a).collect();
        vs.extend(sb.basis().iter().map(embed_b));
        Subspace::span(n, &vs, Exact)
    };
    let lo = a.w.bottom().min(b.w.bottom());
    let hi = a.w.top().max(b.w.top());
    let w_steps = (lo..=hi)
        .map(|k| Ok((k, sum_steps(a.w.get(k), b.w.get(k))?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let plo = a.f.bottom().min(b.f.bottom());
    let phi = a.f.top().max(b.f.top());
    let f_steps = (plo..=phi)
        .map(|p| Ok((p, sum_steps(a.f.get(p), b.f.get(p))?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let mut hodge = a.pol.hodge_numbers.clone();
    for (pq, h) in &b.pol.hodge_numbers {
        *hodge.entry(*pq).or_insert(0) += h;
    }
    let mut lifts: BTreeMap<i32, Vec<Vec<Gq>>> = BTreeMap::new();
    for (k, ls) in &a.pol.lifts {
        lifts.entry(*k).or_default().extend(ls.iter().map(embed_a));
    }
    for (k, ls) in &b.pol.lifts {
        lifts.entry(*k).or_default().extend(ls.iter().map(embed_b));
    }
    Ok(Record {
        f: DecFiltration::from_steps(n, f_steps, Exact)?,
        w: IncFiltration::from_steps(n, w_steps, Exact)?,
        pol: PolarizationSystem {
            hodge_numbers: hodge,
            lifts,
            forms: merge_forms(&a.pol.forms, &b.pol.forms),
        },
        n: Some(block_diag(&a.nilpotent(), &b.nilpotent())),
    })
}

fn tensor_span(a: &Subspace<Gq>, b: &Subspace<Gq>) -> Vec<Vec<Gq>> {
    let mut out = Vec::new();
    for u in a.basis() {
        for v in b.basis() {
            out.push(kron_vec(&u, &v));
        }
    }
    out
}

pub fn tensor(a: &Record<Gq>, b: &Record<Gq>) -> Result<Record<Gq>> {
    let n = a.dim() * b.dim();
    let w_steps = (a.w.bottom() + b.w.bottom()..=a.w.top() + b.w.top())
        .map(|k| {
            let vs: Vec<Vec<Gq>> = (a.w.bottom()..=a.w.top())
                .flat_map(|i| tensor_span(&a.w.get(i), &b.w.get(k - i)))
                .collect();
            Ok((k, Subspace::span(n, &vs, Exact)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let f_steps = (a.f.bottom() + b.f.bottom()..=a.f.top() + b.f.top())
        .map(|p| {
            let vs: Vec<Vec<Gq>> = (a.f.bottom()..=a.f.top())
                .flat_map(|i| tensor_span(&a.f.get(i), &b.f.get(p - i)))
                .collect();
            Ok((p, Subspace::span(n, &vs, Exact)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    let mut hodge = BTreeMap::new();
    for ((p1, q1), h1) in &a.pol.hodge_numbers {
        for ((p2, q2), h2) in &b.pol.hodge_numbers {
            *hodge.entry((p1 + p2, q1 + q2)).or_insert(0) += h1 * h2;
        }
    }
    let mut lifts: BTreeMap<i32, Vec<Vec<Gq>>> = BTreeMap::new();
    let mut forms: BTreeMap<i32, Matrix<Gq>> = BTreeMap::new();
    for (ka, la) in &a.pol.lifts {
        for (kb, lb) in &b.pol.lifts {
            let k = ka + kb;
            let entry = lifts.entry(k).or_default();
            for u in la {
                for v in lb {
                    entry.push(kron_vec(u, v));
                }
            }
            let s = kron(&a.pol.forms[ka], &b.pol.forms[kb]);
            let merged = match forms.get(&k) {
                Some(x) => block_diag(x, &s),
                None => s,
            };
            forms.insert(k, merged);
        }
    }
    let na = a.nilpotent();
    let nb = b.nilpotent();
    let nt = kron(&na, &Matrix::identity(b.dim())).add(&kron(&Matrix::identity(a.dim()), &nb));
    Ok(Record {
        f: DecFiltration::from_steps(n, f_steps, Exact)?,
        w: IncFiltration::from_steps(n, w_steps, Exact)?,
        pol: PolarizationSystem {
            hodge_numbers: hodge,
            lifts,
            forms,
        },
        n: Some(nt),
    })
}

/// Dual `(F*, W*)`: `W*_k = ann W_{-k-1}`, `F*^p = ann F^{1-p}`, in the dual basis.
pub fn dual_filtrations(
    f: &DecFiltration<Gq>,
    w: &IncFiltration<Gq>,
) -> Result<(DecFiltration<Gq>, IncFiltration<Gq>)> {
    let n = w.ambient_dim();
    let ann = |s: Subspace<Gq>| Subspace::span(n, &s.annihilator(Exact), Exact);
    let w_steps = (-w.top() - 1..=-w.bottom() + 1)
        .map(|k| Ok((k, ann(w.get(-k - 1))?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let f_steps = (1 - f.top() - 1..=1 - f.bottom() + 1)
        .map(|p| Ok((p, ann(f.get(1 - p))?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok((
        DecFiltration::from_steps(n, f_steps, Exact)?,
        IncFiltration::from_steps(n, w_steps, Exact)?,
    ))
}

/// Small rational in `[-m, m]` with denominator at most `d`.
pub fn small_rational(rng: &mut CorpusRng, m: i64, d: i64) -> Gq {
    let den = rng.gen_range(1..=d);
    Gq::ratio(rng.gen_range(-m * den..=m * den), den)
}

/// Random element of `ℚ(i)` with nonzero imaginary part.
pub fn complex_rational(rng: &mut CorpusRng) -> Gq {
    let re = small_rational(rng, 3, 4);
    let mut im = small_rational(rng, 3, 4);
    while im.is_exact_zero() {
        im = small_rational(rng, 3, 4);
    }
    Gq::new(re.re, im.re)
}

/// Random invertible real rational matrix close to the identity pattern:
/// a product of a unit lower and a unit upper triangular matrix with a
/// small diagonal.
pub fn random_real_gl(rng: &mut CorpusRng, n: usize) -> Matrix<Gq> {
    let mut l = Matrix::identity(n);
    let mut u = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(0.4) {
                if i > j {
                    l[(i, j)] = Gq::int(rng.gen_range(-2..=2));
                } else if i < j {
                    u[(i, j)] = Gq::int(rng.gen_range(-2..=2));
                }
            }
        }
        u[(i, i)] = Gq::int(*[1, -1, 2].get(rng.gen_range(0..3)).unwrap());
    }
    l.mul(&u)
}

/// Moves a record by a random real automorphism.
pub fn transport(rng: &mut CorpusRng, r: &Record<Gq>) -> Result<Record<Gq>> {
    let g = random_real_gl(rng, r.dim());
    r.transform(&g, Exact)
}

/// Random block for admissible triples, of dimension at most `max_dim`.
fn admissible_block(rng: &mut CorpusRng, max_dim: usize, allow_complex: bool) -> Record<Gq> {
    loop {
        let kind = rng.gen_range(0..5);
        let rec = match kind {
            0 | 1 => {
                let lambda = if allow_complex && rng.gen_bool(0.5) {
                    complex_rational(rng)
                } else {
                    small_rational(rng, 3, 4)
                };
                hodge_tate_pair(lambda)
            }
            2 => sl2_string(rng.gen_range(1..=3)),
            3 => weight_one_block(),
            _ => hodge_tate_line(rng.gen_range(-1..=2)),
        };
        if rec.dim() <= max_dim {
            return rec;
        }
    }
}

/// An admissible `(F, W, N)` of dimension at most `max_dim`, built from the
/// blocks by `⊕` and `⊗` and transported by a random real automorphism.
pub fn admissible_instance(rng: &mut CorpusRng, max_dim: usize) -> Result<Record<Gq>> {
    let mut rec = admissible_block(rng, max_dim, true);
    let steps = rng.gen_range(0..=2);
    for _ in 0..steps {
        let room = max_dim / rec.dim();
        if room >= 2 && rng.gen_bool(0.35) {
            let other = admissible_block(rng, room, false);
            rec = tensor(&rec, &other)?;
        } else if rec.dim() < max_dim {
            let other = admissible_block(rng, max_dim - rec.dim(), true);
            rec = direct_sum(&rec, &other)?;
        }
    }
    transport(rng, &rec)
}

/// Same as [`admissible_instance`] but guaranteed to contain a
/// Hodge–Tate pair with non-real `λ`, so the limit is not split over `ℝ`.
pub fn non_split_instance(rng: &mut CorpusRng, max_dim: usize) -> Result<Record<Gq>> {
    let mut rec = hodge_tate_pair(complex_rational(rng));
    if max_dim > 2 && rng.gen_bool(0.7) {
        let other = admissible_block(rng, max_dim - 2, true);
        rec = if other.dim() * 2 <= max_dim && rng.gen_bool(0.4) {
            tensor(&rec, &other)?
        } else {
            direct_sum(&rec, &other)?
        };
    }
    transport(rng, &rec)
}

/// Blocks whose `(F, W)` is itself a graded-polarized mixed Hodge structure.
fn mhs_block(rng: &mut CorpusRng, max_dim: usize) -> Record<Gq> {
    loop {
        let rec = match rng.gen_range(0..4) {
            0 | 1 => {
                let lambda = if rng.gen_bool(0.5) {
                    complex_rational(rng)
                } else {
                    small_rational(rng, 3, 4)
                };
                hodge_tate_pair(lambda)
            }
            2 => weight_one_block(),
            _ => hodge_tate_line(rng.gen_range(-1..=2)),
        };
        if rec.dim() <= max_dim {
            return rec;
        }
    }
}

/// A graded-polarized mixed Hodge structure of dimension at most `max_dim`.
pub fn mhs_instance(rng: &mut CorpusRng, max_dim: usize) -> Result<Record<Gq>> {
    let mut rec = mhs_block(rng, max_dim);
    for _ in 0..rng.gen_range(0..=3) {
        let room = max_dim / rec.dim();
        if room >= 2 && rng.gen_bool(0.35) {
            let other = mhs_block(rng, room);
            rec = tensor(&rec, &other)?;
        } else if rec.dim() < max_dim {
            let other = mhs_block(rng, max_dim - rec.dim());
            rec = direct_sum(&rec, &other)?;
        }
    }
    transport(rng, &rec)
}

/// Nilpotent matrix with a random Jordan type, conjugated by a random
/// real automorphism.
pub fn random_nilpotent(rng: &mut CorpusRng, n: usize) -> Endo<Gq> {
    let mut m = Matrix::zeros(n, n);
    let mut i = 0;
    while i < n {
        let len = rng.gen_range(1..=n - i);
        for j in i..i + len - 1 {
            m[(j + 1, j)] = Gq::int(1);
        }
        i += len;
    }
    let g = random_real_gl(rng, n);
    m.conjugate_by(&g, Exact).expect("invertible")
}

/// Direct sum of irreducible sl₂-representations, conjugated by a random
/// real automorphism: `(n₋, y, n₊)`.
pub fn random_sl2_representation(rng: &mut CorpusRng, n: usize) -> (Endo<Gq>, Endo<Gq>, Endo<Gq>) {
    let mut nm = Matrix::zeros(n, n);
    let mut np = Matrix::zeros(n, n);
    let mut y = Matrix::zeros(n, n);
    let mut start = 0;
    while start < n {
        let len = rng.gen_range(1..=n - start);
        let d = len as i64 - 1;
        for k in 0..len {
            y[(start + k, start + k)] = Gq::int(d - 2 * k as i64);
            if k + 1 < len {
                // n₋ v_k = v_{k+1}, n₊ v_{k+1} = (k+1)(d-k) v_k.
                nm[(start + k + 1, start + k)] = Gq::int(1);
                np[(start + k, start + k + 1)] = Gq::int((k as i64 + 1) * (d - k as i64));
            }
        }
        start += len;
    }
    let g = random_real_gl(rng, n);
    let c = |a: &Endo<Gq>| a.conjugate_by(&g, Exact).expect("invertible");
    (c(&nm), c(&y), c(&np))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mhs::deligne_bigrading;

    #[test]
    fn blocks_validate() {
        for r in [
            hodge_tate_pair(Gq::complex(1, 2, 1, 3)),
            sl2_string(3),
            weight_one_block(),
            hodge_tate_line(1),
        ] {
            r.validate(Exact).unwrap();
        }
    }

    #[test]
    fn tensor_of_pairs_is_mixed() {
        let a = hodge_tate_pair(Gq::ratio(1, 2));
        let b = weight_one_block();
        let t = tensor(&a, &b).unwrap();
        assert_eq!(t.dim(), 4);
        t.validate(Exact).unwrap();
        deligne_bigrading(&t.f, &t.w, Exact).unwrap();
    }

    #[test]
    fn dual_of_pair_is_mixed() {
        let a = hodge_tate_pair(Gq::complex(1, 1, 2, 1));
        let (f, w) = dual_filtrations(&a.f, &a.w).unwrap();
        let b = deligne_bigrading(&f, &w, Exact).unwrap();
        assert_eq!(b.hodge_numbers(), BTreeMap::from([((0, 0), 1), ((-1, -1), 1)]));
    }

    #[test]
    fn sl2_representation_brackets() {
        let mut r = rng(5);
        let (nm, y, np) = random_sl2_representation(&mut r, 6);
        assert_eq!(np.commutator(&nm), y);
        assert_eq!(y.commutator(&nm), nm.scale(&Gq::int(-2)));
    }
}
