//! The tuple index set `Σ_t(m, n)`, its bijection onto orbit indices and
//! the partial-permutation decompositions `w = y·I_t·v⁻¹ = z·I_t·u⁻¹`.

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};
use crate::leaves::LeafIndex;
use crate::permutations::{join_blocks, split_blocks, Blocks, Parabolic, PartialPermutation, Permutation};

/// `(y, v, z, u)` with `y, z ∈ S_m`, `v, u ∈ S_n` and rank `t`.
///
/// Invariants: `y(t+1..m)`, `u(t+1..n)` increasing; `v(1..t)`, `z(1..t)`
/// increasing; `z <= y` and `v <= u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SigmaTuple {
    pub y: Permutation,
    pub v: Permutation,
    pub z: Permutation,
    pub u: Permutation,
    pub t: usize,
}

#[derive(Deserialize)]
struct SigmaWire {
    y: Permutation,
    v: Permutation,
    z: Permutation,
    u: Permutation,
    t: usize,
}

impl<'de> Deserialize<'de> for SigmaTuple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let SigmaWire { y, v, z, u, t } = SigmaWire::deserialize(d)?;
        SigmaTuple::new(y, v, z, u, t).map_err(serde::de::Error::custom)
    }
}

impl SigmaTuple {
    pub fn new(y: Permutation, v: Permutation, z: Permutation, u: Permutation, t: usize) -> Result<Self> {
        let sigma = SigmaTuple { y, v, z, u, t };
        sigma.validate()?;
        Ok(sigma)
    }

    pub fn m(&self) -> usize {
        self.y.size()
    }

    pub fn n(&self) -> usize {
        self.v.size()
    }

    pub fn validate(&self) -> Result<()> {
        let (m, n, t) = (self.m(), self.n(), self.t);
        let bad = |msg: String| Err(Error::InvalidSigma(msg));
        if self.z.size() != m || self.u.size() != n {
            return bad("y, z must lie in S_m and v, u in S_n".into());
        }
        if t > m.min(n) {
            return Err(Error::RankOutOfRange { t, rows: m, cols: n });
        }
        if !self.y.is_min_rep(Parabolic::last(m - t))? {
            return bad(format!("y = {:?} is not increasing on {}..={m}", self.y, t + 1));
        }
        if !self.v.is_min_rep(Parabolic::first(t))? {
            return bad(format!("v = {:?} is not increasing on 1..={t}", self.v));
        }
        if !self.z.is_min_rep(Parabolic::first(t))? {
            return bad(format!("z = {:?} is not increasing on 1..={t}", self.z));
        }
        if !self.u.is_min_rep(Parabolic::last(n - t))? {
            return bad(format!("u = {:?} is not increasing on {}..={n}", self.u, t + 1));
        }
        if !self.z.bruhat_leq(&self.y)? {
            return bad(format!("z = {:?} is not below y = {:?}", self.z, self.y));
        }
        if !self.v.bruhat_leq(&self.u)? {
            return bad(format!("v = {:?} is not below u = {:?}", self.v, self.u));
        }
        Ok(())
    }

    /// `y · I_t^{m,n} · v⁻¹`, the `B⁺` class of the orbit.
    pub fn upper_partial(&self) -> PartialPermutation {
        let i_t = PartialPermutation::partial_identity(self.m(), self.n(), self.t).unwrap();
        self.y
            .to_partial()
            .compose_unchecked(&i_t)
            .compose_unchecked(&self.v.inverse().to_partial())
    }

    /// `z · I_t^{m,n} · u⁻¹`, the `B⁻` class of the orbit.
    pub fn lower_partial(&self) -> PartialPermutation {
        let i_t = PartialPermutation::partial_identity(self.m(), self.n(), self.t).unwrap();
        self.z
            .to_partial()
            .compose_unchecked(&i_t)
            .compose_unchecked(&self.u.inverse().to_partial())
    }
}

/// All of `Σ_t(m, n)`, ordered lexicographically by `(y, v, z, u)`.
pub fn enumerate_sigma(m: usize, n: usize, t: usize) -> Result<Vec<SigmaTuple>> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter("m and n must be positive".into()));
    }
    if t > m.min(n) {
        return Err(Error::RankOutOfRange { t, rows: m, cols: n });
    }
    let reps = |size: usize, par: Parabolic| -> Vec<Permutation> {
        Permutation::all(size)
            .filter(|p| p.is_min_rep(par).unwrap())
            .collect()
    };
    let ys = reps(m, Parabolic::last(m - t));
    let zs = reps(m, Parabolic::first(t));
    let vs = reps(n, Parabolic::first(t));
    let us = reps(n, Parabolic::last(n - t));
    let zy: Vec<(usize, usize)> = (0..ys.len())
        .flat_map(|a| (0..zs.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| zs[b].bruhat_leq(&ys[a]).unwrap())
        .collect();
    let vu: Vec<(usize, usize)> = (0..vs.len())
        .flat_map(|a| (0..us.len()).map(move |b| (a, b)))
        .filter(|&(a, b)| vs[a].bruhat_leq(&us[b]).unwrap())
        .collect();
    let mut out = Vec::with_capacity(zy.len() * vu.len());
    for &(yi, zi) in &zy {
        for &(vi, ui) in &vu {
            out.push(SigmaTuple {
                y: ys[yi].clone(),
                v: vs[vi].clone(),
                z: zs[zi].clone(),
                u: us[ui].clone(),
                t,
            });
        }
    }
    out.sort();
    Ok(out)
}

/// The permutation of `S_{m+n}` whose block form, cut after `m` rows and
/// `n` columns, is
/// `[[w°ᵐ y I_t v⁻¹, w°ᵐ y J_t z⁻¹ w°ᵐ], [u J_t v⁻¹, u I_t z⁻¹ w°ᵐ]]`.
pub fn phi(sigma: &SigmaTuple) -> Result<Permutation> {
    sigma.validate()?;
    let (m, n, t) = (sigma.m(), sigma.n(), sigma.t);
    let rev_m = Permutation::longest(m).to_partial();
    let y = sigma.y.to_partial();
    let u = sigma.u.to_partial();
    let v_inv = sigma.v.inverse().to_partial();
    let z_inv = sigma.z.inverse().to_partial();
    let i_mn = PartialPermutation::partial_identity(m, n, t)?;
    let i_nm = PartialPermutation::partial_identity(n, m, t)?;
    let j_m = PartialPermutation::lower_identity(m, t)?;
    let j_n = PartialPermutation::lower_identity(n, t)?;
    let chain = |parts: &[&PartialPermutation]| {
        parts[1..]
            .iter()
            .fold(parts[0].clone(), |acc, p| acc.compose_unchecked(p))
    };
    let blocks = Blocks {
        b11: chain(&[&rev_m, &y, &i_mn, &v_inv]),
        b12: chain(&[&rev_m, &y, &j_m, &z_inv, &rev_m]),
        b21: chain(&[&u, &j_n, &v_inv]),
        b22: chain(&[&u, &i_nm, &z_inv, &rev_m]),
    };
    join_blocks(&blocks)
}

/// `w°ᴺ · phi(σ)` as an orbit index of `M(m, n)`.
pub fn phi_to_leaf(sigma: &SigmaTuple) -> Result<LeafIndex> {
    let (m, n) = (sigma.m(), sigma.n());
    let w = Permutation::longest(m + n).compose_unchecked(&phi(sigma)?);
    LeafIndex::new(w, m, n)
}

/// Completes `head` to a permutation of `1..=size` by appending the unused
/// values in ascending order.
fn extend_ascending(mut head: Vec<usize>, size: usize) -> Permutation {
    let mut used = vec![false; size + 1];
    for &h in &head {
        used[h] = true;
    }
    head.extend((1..=size).filter(|&k| !used[k]));
    Permutation::from_images_unchecked(head)
}

/// The unique tuple with `phi_to_leaf(σ) = leaf`.
pub fn phi_inv(leaf: &LeafIndex) -> SigmaTuple {
    let (m, n, t) = (leaf.m(), leaf.n(), leaf.t());
    let w = Permutation::longest(m + n).compose_unchecked(leaf.w());
    let Blocks { b11, b12, b21, b22 } = split_blocks(&w, m, n).unwrap();
    debug_assert_eq!(b11.rank(), t);
    let flip = |i: usize| m + 1 - i;

    // y: w°ᵐ applied to the rows of b11 taken at its columns in ascending order
    let dom11 = b11.domain();
    let y = extend_ascending(dom11.iter().map(|&c| flip(b11.get(c).unwrap())).collect(), m);
    // u: rows of b22 taken at its columns in descending order
    let mut dom22 = b22.domain();
    dom22.reverse();
    let u = extend_ascending(dom22.iter().map(|&c| b22.get(c).unwrap()).collect(), n);

    let b21_rows = b21.row_view();
    let mut v: Vec<usize> = dom11.clone();
    v.extend((t + 1..=n).map(|j| b21_rows[u.image(j) - 1].expect("b21 covers the tail of u")));

    // w°ᵐ · b12ᵀ · w°ᵐ as a map on 1..=m
    let b12_rows = b12.row_view();
    let mut z: Vec<usize> = dom22.iter().map(|&c| flip(c)).collect();
    z.extend((t + 1..=m).map(|j| {
        let col = b12_rows[flip(y.image(j)) - 1].expect("b12 covers the tail of y");
        flip(col)
    }));

    let sigma = SigmaTuple {
        y,
        v: Permutation::from_images_unchecked(v),
        z: Permutation::from_images_unchecked(z),
        u,
        t,
    };
    debug_assert!(sigma.validate().is_ok(), "{sigma:?}");
    debug_assert_eq!(phi_to_leaf(&sigma).as_ref().ok(), Some(leaf));
    sigma
}

/// Which factorization of a partial permutation to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// `w = y · I_t · v⁻¹` with `y(t+1..m)` increasing and `v` increasing on
    /// both `1..t` and `t+1..n`.
    Yv,
    /// `w = z · I_t · u⁻¹` with `z` increasing on both blocks and
    /// `u(t+1..n)` increasing.
    Zu,
}

/// The unique factorization of `w` in the requested form.
pub fn decompose_partial(w: &PartialPermutation, form: Form) -> (Permutation, Permutation) {
    let (m, n) = (w.rows(), w.cols());
    match form {
        Form::Yv => {
            let v = extend_ascending(w.domain(), n);
            let y = extend_ascending(w.domain().iter().map(|&c| w.get(c).unwrap()).collect(), m);
            (y, v)
        }
        Form::Zu => {
            let z = extend_ascending(w.range(), m);
            let rows = w.row_view();
            let u = extend_ascending(w.range().iter().map(|&r| rows[r - 1].unwrap()).collect(), n);
            (z, u)
        }
    }
}

/// `y · I_t^{m,n} · v⁻¹` for arbitrary permutations.
pub fn recompose(left: &Permutation, right: &Permutation, t: usize) -> Result<PartialPermutation> {
    let i_t = PartialPermutation::partial_identity(left.size(), right.size(), t)?;
    Ok(left
        .to_partial()
        .compose_unchecked(&i_t)
        .compose_unchecked(&right.inverse().to_partial()))
}

/// `σ = (y, v₀τ₂, z₀τ₁, u)` split into its base tuple and the tail
/// permutations `τ₁ ∈ S²_{m-t}`, `τ₂ ∈ S²_{n-t}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Retiling {
    pub base: SigmaTuple,
    pub tau1: Permutation,
    pub tau2: Permutation,
}

pub fn sigma_retile(sigma: &SigmaTuple) -> Retiling {
    let (m, n, t) = (sigma.m(), sigma.n(), sigma.t);
    let z0 = sigma.z.min_rep(Parabolic::last(m - t)).unwrap();
    let v0 = sigma.v.min_rep(Parabolic::last(n - t)).unwrap();
    let tau1 = z0.inverse().compose_unchecked(&sigma.z);
    let tau2 = v0.inverse().compose_unchecked(&sigma.v);
    let base = SigmaTuple {
        y: sigma.y.clone(),
        v: v0,
        z: z0,
        u: sigma.u.clone(),
        t,
    };
    debug_assert!(base.validate().is_ok());
    Retiling { base, tau1, tau2 }
}

impl Retiling {
    pub fn recombine(&self) -> SigmaTuple {
        SigmaTuple {
            y: self.base.y.clone(),
            v: self.base.v.compose_unchecked(&self.tau2),
            z: self.base.z.compose_unchecked(&self.tau1),
            u: self.base.u.clone(),
            t: self.base.t,
        }
    }
}
