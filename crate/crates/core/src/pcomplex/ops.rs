use super::ncomplex::{ChainMap, GradedEmbedding, NComplex, NMap};
use crate::error::{Error, Result};
use crate::ffalg::{BasedComplex, Basis, Elem, FFMatrix, FieldRef, SpVec};

/// Degrees `0, s, N, N+s, 2N, ...` that survive the contraction `C_[s]`.
pub fn contraction_degrees(order: usize, s: usize, len: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut a = 0;
    let mut i = 0;
    while a < len {
        out.push(a);
        a += if i % 2 == 0 { s } else { order - s };
        i += 1;
    }
    out
}

/// The ordinary complex `C_[s]`: objects `C^0, C^s, C^N, C^{N+s}, ...` with
/// differentials alternating between `d^s` and `d^{N-s}`.
pub fn contract(c: &NComplex, s: usize) -> Result<BasedComplex> {
    if s == 0 || s >= c.order() {
        return Err(Error::ContractionIndex { s, n: c.order() });
    }
    let degs = contraction_degrees(c.order(), s, c.len());
    let objects: Vec<Basis> = degs.iter().map(|&a| c.object(a)).collect();
    let diffs = degs
        .windows(2)
        .map(|w| c.d_power(w[0], w[1] - w[0]))
        .collect::<Result<Vec<_>>>()?;
    BasedComplex::new_unchecked(c.field(), objects, diffs)
}

/// Contraction of a map of N-complexes.
pub fn contract_map(f: &NMap, s: usize) -> Result<ChainMap> {
    let source = contract(&f.source, s)?;
    let target = contract(&f.target, s)?;
    let len = f.source.len().max(f.target.len());
    let maps = contraction_degrees(f.source.order(), s, len).into_iter().map(|a| f.map(a)).collect();
    Ok(ChainMap { source, target, maps })
}

/// Position of tilde-degree `a` in the underlying ordinary complex:
/// `(index, copy)` with `copy = 0` for even indices.
pub fn tilde_position(order: usize, a: usize) -> (usize, usize) {
    let (m, j) = (a / order, a % order);
    if j == 0 {
        (2 * m, 0)
    } else {
        (2 * m + 1, j)
    }
}

/// The N-complex `K~`: each odd object of `K` repeated `N-1` times, joined
/// by identities, even objects once.
pub fn tilde(k: &BasedComplex, order: usize) -> Result<NComplex> {
    if order < 2 {
        return Err(Error::Dimension("order below 2".into()));
    }
    let f = k.field();
    let mut objects = Vec::new();
    let mut diffs = Vec::new();
    for i in 0..k.len() {
        let copies = if i % 2 == 0 { 1 } else { order - 1 };
        for c in 0..copies {
            if !objects.is_empty() {
                if c == 0 {
                    diffs.push(k.d(i - 1));
                } else {
                    diffs.push(FFMatrix::identity(f, k.object(i)));
                }
            }
            objects.push(k.object(i));
        }
    }
    NComplex::new_unchecked(f, order, objects, diffs)
}

/// `eta_C : (C_[1])~ -> C`, identity in degrees `i` with `N | i` or
/// `N | i-1` and the appropriate power of the differential in between.
pub fn eta(c: &NComplex) -> Result<NMap> {
    let n = c.order();
    let source = tilde(&contract(c, 1)?, n)?;
    let len = source.len().max(c.len());
    let mut maps = Vec::with_capacity(len);
    for i in 0..len {
        let j = i % n;
        let m = if j == 0 {
            FFMatrix::identity(c.field(), source.object(i))
        } else {
            c.d_power(i - j + 1, j - 1)?
        };
        let m = if m.nrows() == c.dim(i) && m.ncols() == source.dim(i) {
            m
        } else {
            FFMatrix::zeros(c.field(), c.object(i), source.object(i))
        };
        maps.push(m.with_bases(c.object(i), source.object(i))?);
    }
    Ok(NMap { source, target: c.clone(), maps })
}

/// One summand `X^a ⊗ Y^b` of a tensor product in a fixed total degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Summand {
    pub a: usize,
    pub b: usize,
    pub offset: usize,
    pub rows: usize,
    pub cols: usize,
}

impl Summand {
    pub fn dim(&self) -> usize {
        self.rows * self.cols
    }
}

/// Summands of `(X ⊗ Y)^t` ordered by the left index.
pub fn tensor_layout(x: &[usize], y: &[usize], t: usize) -> Vec<Summand> {
    let mut out = Vec::new();
    let mut off = 0;
    for a in 0..=t {
        let b = t - a;
        if a < x.len() && b < y.len() {
            out.push(Summand { a, b, offset: off, rows: x[a], cols: y[b] });
            off += x[a] * y[b];
        }
    }
    out
}

fn find(layout: &[Summand], a: usize) -> Option<&Summand> {
    layout.iter().find(|s| s.a == a)
}

/// Differential of a tensor product; `second_sign(a)` multiplies `1 ⊗ d`.
fn tensor_diffs(
    f: &FieldRef,
    xd: &dyn Fn(usize) -> FFMatrix,
    yd: &dyn Fn(usize) -> FFMatrix,
    xdims: &[usize],
    ydims: &[usize],
    objects: &[Basis],
    second_sign: &dyn Fn(usize) -> Elem,
) -> Result<Vec<FFMatrix>> {
    let mut diffs = Vec::new();
    for t in 0..objects.len().saturating_sub(1) {
        let src = tensor_layout(xdims, ydims, t);
        let tgt = tensor_layout(xdims, ydims, t + 1);
        let mut cols: Vec<SpVec> = vec![Vec::new(); objects[t].len()];
        for s in &src {
            let dx = (s.a + 1 < xdims.len()).then(|| xd(s.a));
            let dy = (s.b + 1 < ydims.len()).then(|| yd(s.b));
            let tx = find(&tgt, s.a + 1);
            let ty = find(&tgt, s.a);
            let sign = second_sign(s.a);
            for u in 0..s.rows {
                for v in 0..s.cols {
                    let col = &mut cols[s.offset + u * s.cols + v];
                    if let (Some(dx), Some(tx)) = (&dx, tx) {
                        dx.for_each_in_column(u, |i, a| col.push(((tx.offset + i as usize * tx.cols + v) as u32, a)));
                    }
                    if let (Some(dy), Some(ty)) = (&dy, ty) {
                        dy.for_each_in_column(v, |j, b| col.push(((ty.offset + u * ty.cols + j as usize) as u32, f.mul(sign, b))));
                    }
                }
            }
        }
        let cols = cols.into_iter().map(|c| crate::ffalg::normalize(f, c)).collect();
        diffs.push(FFMatrix::from_columns(f, objects[t + 1].clone(), objects[t].clone(), cols)?);
    }
    Ok(diffs)
}

fn tensor_objects(x: &[Basis], y: &[Basis], tag: &dyn Fn(usize) -> Option<&'static str>) -> Vec<Basis> {
    let len = if x.is_empty() || y.is_empty() { 0 } else { x.len() + y.len() - 1 };
    (0..len)
        .map(|t| {
            let xd: Vec<usize> = x.iter().map(|b| b.len()).collect();
            let yd: Vec<usize> = y.iter().map(|b| b.len()).collect();
            let parts = tensor_layout(&xd, &yd, t)
                .into_iter()
                .map(|s| {
                    let b = Basis::tensor(&x[s.a], &y[s.b]);
                    match tag(s.a) {
                        Some(t) => Basis::tagged(t, &b),
                        None => b,
                    }
                })
                .collect();
            Basis::sum(parts)
        })
        .collect()
}

/// Tensor product of p-complexes over a field of characteristic p, with
/// the unsigned differential `d ⊗ 1 + 1 ⊗ d`.
pub fn tensor_p(c: &NComplex, d: &NComplex) -> Result<NComplex> {
    let p = c.field().p();
    if c.order() != d.order() || c.order() != p as usize {
        return Err(Error::OrderMismatch { order: c.order().max(d.order()), p });
    }
    if c.field() != d.field() {
        return Err(Error::FieldMismatch(c.field().q(), d.field().q()));
    }
    let objects = tensor_objects(c.objects(), d.objects(), &|_| None);
    let one = c.field().one();
    let diffs = tensor_diffs(c.field(), &|a| c.d(a), &|b| d.d(b), &c.dims(), &d.dims(), &objects, &|_| one)?;
    NComplex::new_unchecked(c.field(), c.order(), objects, diffs)
}

/// Tensor product of ordinary complexes with the Koszul sign. Summands with
/// even left index form `T`, odd left index form `T'`; the differential is
/// `d⊗1 + 1⊗d` on `T` and `d⊗1 - 1⊗d` on `T'`.
pub fn tensor_ord(k: &BasedComplex, l: &BasedComplex) -> Result<BasedComplex> {
    if k.field() != l.field() {
        return Err(Error::FieldMismatch(k.field().q(), l.field().q()));
    }
    let f = k.field();
    let objects = tensor_objects(k.objects(), l.objects(), &|a| Some(if a % 2 == 0 { "T" } else { "T'" }));
    let plus = f.one();
    let minus = f.neg(plus);
    let diffs = tensor_diffs(f, &|a| k.d(a), &|b| l.d(b), &k.dims(), &l.dims(), &objects, &|a| if a % 2 == 0 { plus } else { minus })?;
    BasedComplex::new_unchecked(f, objects, diffs)
}

/// Tensor product of two chain maps, as a map between `tensor_ord` products.
pub fn tensor_ord_map(f: &ChainMap, g: &ChainMap) -> Result<ChainMap> {
    let source = tensor_ord(&f.source, &g.source)?;
    let target = tensor_ord(&f.target, &g.target)?;
    let (sx, sy) = (f.source.dims(), g.source.dims());
    let (tx, ty) = (f.target.dims(), g.target.dims());
    let field = source.field().clone();
    let mut maps = Vec::new();
    for t in 0..source.len().max(target.len()) {
        let src = tensor_layout(&sx, &sy, t);
        let tgt = tensor_layout(&tx, &ty, t);
        let mut cols: Vec<SpVec> = vec![Vec::new(); source.dim(t)];
        for s in &src {
            let Some(ts) = tgt.iter().find(|x| x.a == s.a) else { continue };
            let block = f.map(s.a).kron(&g.map(s.b))?;
            for c in 0..block.ncols() {
                block.for_each_in_column(c, |i, a| cols[s.offset + c].push(((ts.offset + i as usize) as u32, a)));
            }
        }
        maps.push(FFMatrix::from_columns(&field, target.object(t), source.object(t), cols)?);
    }
    Ok(ChainMap { source, target, maps })
}

/// `H : K ⊗ L -> ((K~) ⊗ (L~))_[1]` for ordinary complexes `K`, `L` and the
/// characteristic `p` of the field. In even degrees `(x, x') ↦ (x, δ(-x'))`
/// with `δ(y) = (y, -y, y, ...)` on the `p-1` diagonal copies; in odd
/// degrees `(x, x') ↦ (x, x', 0)`.
pub fn h_map_big(k: &BasedComplex, l: &BasedComplex) -> Result<ChainMap> {
    let f = k.field().clone();
    let p = f.p() as usize;
    let source = tensor_ord(k, l)?;
    let tk = tilde(k, p)?;
    let tl = tilde(l, p)?;
    let big = tensor_p(&tk, &tl)?;
    let target = contract(&big, 1)?;
    let (kd, ld) = (k.dims(), l.dims());
    let (tkd, tld) = (tk.dims(), tl.dims());
    let minus = f.neg(f.one());
    let mut maps = Vec::new();
    for m in 0..source.len().max(target.len()) {
        let t = (m / 2) * p + m % 2;
        let src = tensor_layout(&kd, &ld, m);
        let tgt = tensor_layout(&tkd, &tld, t);
        let mut cols: Vec<SpVec> = vec![Vec::new(); source.dim(m)];
        for s in &src {
            let n = m / 2;
            let targets: Vec<(usize, Elem)> = if m % 2 == 0 {
                if s.a % 2 == 0 {
                    vec![((s.a / 2) * p, f.one())]
                } else {
                    let kk = (s.a - 1) / 2;
                    (1..p).map(|c| (kk * p + c, if c % 2 == 0 { f.one() } else { minus })).collect()
                }
            } else if s.a % 2 == 0 {
                vec![((s.a / 2) * p, f.one())]
            } else {
                vec![(((s.a - 1) / 2) * p + 1, f.one())]
            };
            debug_assert!(n * p <= t);
            for (a, coef) in targets {
                let ts = find(&tgt, a).ok_or_else(|| Error::Verification(format!("missing target summand {a} in degree {t}")))?;
                debug_assert_eq!((ts.rows, ts.cols), (s.rows, s.cols));
                for x in 0..s.dim() {
                    cols[s.offset + x].push(((ts.offset + x) as u32, coef));
                }
            }
        }
        let cols = cols.into_iter().map(|c| crate::ffalg::normalize(&f, c)).collect();
        maps.push(FFMatrix::from_columns(&f, target.object(m), source.object(m), cols)?);
    }
    Ok(ChainMap { source, target, maps })
}

/// `η_C ⊗ η_D` as a map of p-complexes.
pub fn eta_tensor(c: &NComplex, d: &NComplex) -> Result<NMap> {
    let ec = eta(c)?;
    let ed = eta(d)?;
    let source = tensor_p(&ec.source, &ed.source)?;
    let target = tensor_p(c, d)?;
    let f = c.field().clone();
    let (sx, sy) = (ec.source.dims(), ed.source.dims());
    let (tx, ty) = (c.dims(), d.dims());
    let mut maps = Vec::new();
    for t in 0..source.len().max(target.len()) {
        let src = tensor_layout(&sx, &sy, t);
        let tgt = tensor_layout(&tx, &ty, t);
        let mut cols: Vec<SpVec> = vec![Vec::new(); source.dim(t)];
        for s in &src {
            let Some(ts) = find(&tgt, s.a) else { continue };
            if ts.b != s.b {
                continue;
            }
            let block = ec.map(s.a).kron(&ed.map(s.b))?;
            for col in 0..block.ncols() {
                block.for_each_in_column(col, |i, a| cols[s.offset + col].push(((ts.offset + i as usize) as u32, a)));
            }
        }
        maps.push(FFMatrix::from_columns(&f, target.object(t), source.object(t), cols)?);
    }
    Ok(NMap { source, target, maps })
}

/// `h = (η_C ⊗ η_D)_[1] ∘ H : C_[1] ⊗ D_[1] -> (C ⊗ D)_[1]`.
pub fn h_map(c: &NComplex, d: &NComplex) -> Result<ChainMap> {
    let big = h_map_big(&contract(c, 1)?, &contract(d, 1)?)?;
    let e = contract_map(&eta_tensor(c, d)?, 1)?;
    e.compose(&big)
}

/// Embeddings of `p(C, D)`, with `p(C,D)^{2m} = ⊕_{k+l=m} C^{kp} ⊗ D^{lp}`
/// and zero odd degrees, into `C_[1] ⊗ D_[1]` and into `(C ⊗ D)_[1]`.
pub fn p_embed(c: &NComplex, d: &NComplex) -> Result<(GradedEmbedding, GradedEmbedding)> {
    let f = c.field().clone();
    let p = c.order();
    let c1 = contract(c, 1)?;
    let d1 = contract(d, 1)?;
    let left = tensor_ord(&c1, &d1)?;
    let right = contract(&tensor_p(c, d)?, 1)?;
    let len = left.len().max(right.len());
    let mut source = Vec::new();
    let mut lmaps = Vec::new();
    let mut rmaps = Vec::new();
    for deg in 0..len {
        let pairs: Vec<(usize, usize)> = if deg % 2 == 0 {
            let m = deg / 2;
            (0..=m).filter(|&k| k * p < c.len() && (m - k) * p < d.len()).map(|k| (k, m - k)).collect()
        } else {
            Vec::new()
        };
        let parts: Vec<Basis> = pairs.iter().map(|&(k, l)| Basis::tensor(&c.object(k * p), &d.object(l * p))).collect();
        let src = Basis::sum(parts);
        let ll = tensor_layout(&c1.dims(), &d1.dims(), deg);
        let rl = tensor_layout(&c.dims(), &d.dims(), (deg / 2) * p + deg % 2);
        let mut lcols = Vec::new();
        let mut rcols = Vec::new();
        for &(k, _) in &pairs {
            let ls = find(&ll, 2 * k).ok_or_else(|| Error::Verification("missing summand".into()))?;
            let rs = find(&rl, k * p).ok_or_else(|| Error::Verification("missing summand".into()))?;
            for x in 0..ls.dim() {
                lcols.push(vec![((ls.offset + x) as u32, f.one())]);
                rcols.push(vec![((rs.offset + x) as u32, f.one())]);
            }
        }
        lmaps.push(FFMatrix::from_columns(&f, left.object(deg), src.clone(), lcols)?);
        rmaps.push(FFMatrix::from_columns(&f, right.object(deg), src.clone(), rcols)?);
        source.push(src);
    }
    Ok((GradedEmbedding { source: source.clone(), maps: lmaps }, GradedEmbedding { source, maps: rmaps }))
}

/// How many summands of each target carry `C^{kp} ⊗ D^{lp}` in degree
/// `2(k+l)`: `(in C_[1] ⊗ D_[1], in (C ⊗ D)_[1])`.
pub fn embedding_multiplicity(order: usize, clen: usize, dlen: usize, k: usize, l: usize) -> (usize, usize) {
    let deg = 2 * (k + l);
    let c1: Vec<usize> = contraction_degrees(order, 1, clen);
    let d1: Vec<usize> = contraction_degrees(order, 1, dlen);
    let left = (0..=deg)
        .filter(|&i| i < c1.len() && deg - i < d1.len() && c1[i] == k * order && d1[deg - i] == l * order)
        .count();
    let t = (k + l) * order;
    let right = (0..=t).filter(|&a| a < clen && t - a < dlen && a == k * order && t - a == l * order).count();
    (left, right)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionHomology {
    pub s: usize,
    pub dims: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CoresolutionReport {
    pub per_s: Vec<ContractionHomology>,
    /// Augmentation injective, killed by `d^s`, and onto `H^0`.
    pub augmentation_ok: bool,
    pub exact: bool,
}

/// Checks that every contraction is acyclic in positive degrees, and when
/// an augmentation `F -> C^0` is given, that it identifies `F` with `H^0`.
pub fn is_p_coresolution(c: &NComplex, augmentation: Option<&FFMatrix>) -> Result<CoresolutionReport> {
    is_p_coresolution_with(c, augmentation, |_, k| k.homology_dims())
}

pub(crate) fn is_p_coresolution_with(
    c: &NComplex,
    augmentation: Option<&FFMatrix>,
    homology: impl Fn(usize, &BasedComplex) -> Vec<usize>,
) -> Result<CoresolutionReport> {
    let mut per_s = Vec::new();
    let mut exact = true;
    let mut aug_ok = true;
    for s in 1..c.order() {
        let k = contract(c, s)?;
        let dims = homology(s, &k);
        exact &= dims.iter().skip(1).all(|&h| h == 0);
        if let Some(aug) = augmentation {
            let h0 = dims.first().copied().unwrap_or(0);
            aug_ok &= aug.nrows() == c.dim(0) && h0 == aug.ncols() && aug.rank() == aug.ncols() && k.d(0).mul(aug)?.is_zero();
        }
        per_s.push(ContractionHomology { s, dims });
    }
    Ok(CoresolutionReport { per_s, augmentation_ok: aug_ok, exact: exact && aug_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffalg::Field;

    fn segment(f: &FieldRef, order: usize, len: usize) -> NComplex {
        let objects = vec![Basis::indexed(1); len];
        let diffs = (1..len).map(|_| FFMatrix::identity(f, Basis::indexed(1))).collect();
        NComplex::new(f, order, objects, diffs).unwrap()
    }

    #[test]
    fn contraction_of_segment() {
        // k -> k -> k with identities, N = 3: C_[1] is C^0 -> C^1, C_[2] is C^0 -> C^2
        let f = Field::prime(3).unwrap();
        let c = segment(&f, 3, 3);
        assert_eq!(contract(&c, 1).unwrap().dims(), vec![1, 1]);
        assert_eq!(contract(&c, 1).unwrap().homology_dims(), vec![0, 0]);
        let short = segment(&f, 3, 2);
        assert_eq!(contract(&short, 2).unwrap().homology_dims(), vec![1]);
        assert_eq!(contract(&c, 2).unwrap().homology_dims(), vec![0, 0]);
        assert!(contract(&c, 3).is_err());
    }

    #[test]
    fn tilde_contract_roundtrip() {
        let f = Field::prime(5).unwrap();
        let d0 = FFMatrix::from_int_rows(&f, &[vec![1, 0], vec![0, 0]]).unwrap();
        let d1 = FFMatrix::from_int_rows(&f, &[vec![0, 1]]).unwrap();
        let k = BasedComplex::new(&f, vec![Basis::indexed(2), Basis::indexed(2), Basis::indexed(1)], vec![d0, d1]).unwrap();
        let t = tilde(&k, 5).unwrap();
        assert_eq!(t.dims(), vec![2, 2, 2, 2, 2, 1]);
        for s in 1..5 {
            let back = contract(&t, s).unwrap();
            assert_eq!(back.dims(), k.dims());
            for i in 0..2 {
                assert_eq!(back.d(i), k.d(i));
            }
        }
    }

    #[test]
    fn h_big_signs_at_p3() {
        // K = L = k in degree 1 only; (K⊗L)^2 = T'_2 = k
        let f = Field::prime(3).unwrap();
        let k = BasedComplex::new(&f, vec![Basis::indexed(0), Basis::indexed(1)], vec![FFMatrix::zeros(&f, Basis::indexed(1), Basis::indexed(0))]).unwrap();
        let h = h_map_big(&k, &k).unwrap();
        let m = h.map(2);
        let col: Vec<u32> = m.column(0).iter().map(|t| t.1.raw()).collect();
        assert_eq!(col, vec![2, 1]);
        assert!(h.is_chain_map().unwrap());
    }

    #[test]
    fn comparison_maps_on_random_complexes() {
        use super::super::random::{random_complex, random_ncomplex};
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for p in [2u32, 3, 5] {
            let f = Field::prime(p).unwrap();
            let n = p as usize;
            for _ in 0..25 {
                let c = random_ncomplex(&f, &mut rng, n, 3 * n, 3);
                let d = random_ncomplex(&f, &mut rng, n, 3 * n, 3);
                assert!(eta(&c).unwrap().is_chain_map().unwrap());
                let t = tensor_p(&c, &d).unwrap();
                t.check_nilpotent().unwrap();
                let h = h_map(&c, &d).unwrap();
                assert!(h.is_chain_map().unwrap());
                for deg in 0..2 {
                    let m = h.map(deg);
                    assert_eq!(m, FFMatrix::identity(&f, Basis::indexed(m.ncols())), "p={p} deg={deg}");
                }
                let (l, r) = p_embed(&c, &d).unwrap();
                for deg in 0..l.maps.len() {
                    assert_eq!(h.map(deg).mul(&l.maps[deg]).unwrap(), r.maps[deg]);
                }
                let k = random_complex(&f, &mut rng, 4, 3);
                let ll = random_complex(&f, &mut rng, 4, 3);
                assert!(h_map_big(&k, &ll).unwrap().is_chain_map().unwrap());
                let to = tensor_ord(&k, &ll).unwrap();
                for i in 0..to.len().saturating_sub(2) {
                    assert!(to.d(i + 1).mul(&to.d(i)).unwrap().is_zero());
                }
            }
        }
    }
}
