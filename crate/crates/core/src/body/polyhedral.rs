//! Polyhedral bodies in lifted form
//! `K = {x : ∃y, A x + B y ≤ b, E x + F y = d}` with sign-constrained `y`.
//!
//! Polars, sections, projections, unions and sums of polyhedral bodies stay
//! in this class, so every oracle is an exact LP. Pure vertex and pure facet
//! descriptions are cached alongside the lifted form for cheap fast paths.

use crate::error::{Error, Result};
use crate::lp::{lp_solve, Bound, LinearProgram, LpStatus};
use crate::numerics::linalg::{dot, Matrix, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Aux {
    NonNeg,
    Free,
}

impl Aux {
    fn bound(self) -> Bound {
        match self {
            Aux::NonNeg => Bound::NonNegative,
            Aux::Free => Bound::Free,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Row {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Lifted {
    pub n: usize,
    pub aux: Vec<Aux>,
    pub le: Vec<Row>,
    pub eq: Vec<Row>,
}

fn pad(v: &[f64], before: usize, after: usize) -> Vec<f64> {
    let mut out = vec![0.0; before];
    out.extend_from_slice(v);
    out.extend(std::iter::repeat_n(0.0, after));
    out
}

fn lp_status_error(status: LpStatus, what: &str) -> Error {
    match status {
        LpStatus::Infeasible => Error::DegenerateBody(format!("{what}: LP infeasible (origin not interior?)")),
        LpStatus::Unbounded => Error::DegenerateBody(format!("{what}: LP unbounded (body not bounded)")),
        LpStatus::Optimal => unreachable!(),
    }
}

impl Lifted {
    pub fn from_vertices(vertices: &[Vec<f64>]) -> Self {
        let n = vertices[0].len();
        let m = vertices.len();
        let mut eq = Vec::with_capacity(n + 1);
        for i in 0..n {
            let mut x = vec![0.0; n];
            x[i] = 1.0;
            eq.push(Row { x, y: vertices.iter().map(|v| -v[i]).collect(), rhs: 0.0 });
        }
        eq.push(Row { x: vec![0.0; n], y: vec![1.0; m], rhs: 1.0 });
        Self { n, aux: vec![Aux::NonNeg; m], le: vec![], eq }
    }

    pub fn from_facets(facets: &[Vec<f64>]) -> Self {
        let n = facets[0].len();
        let le = facets.iter().map(|a| Row { x: a.clone(), y: vec![], rhs: 1.0 }).collect();
        Self { n, aux: vec![], le, eq: vec![] }
    }

    fn rows(&self) -> impl Iterator<Item = &Row> {
        self.le.iter().chain(&self.eq)
    }

    fn map_rows(&self, f: impl Fn(&Row) -> Row) -> Self {
        Self {
            n: self.n,
            aux: self.aux.clone(),
            le: self.le.iter().map(&f).collect(),
            eq: self.eq.iter().map(&f).collect(),
        }
    }

    pub fn support(&self, u: &[f64]) -> Result<f64> {
        let p = self.aux.len();
        let mut lp = LinearProgram::maximize(pad(u, 0, p));
        for j in 0..self.n {
            lp.bounds[j] = Bound::Free;
        }
        for (j, a) in self.aux.iter().enumerate() {
            lp.bounds[self.n + j] = a.bound();
        }
        for r in &self.le {
            lp.le.push(([r.x.as_slice(), &r.y].concat(), r.rhs));
        }
        for r in &self.eq {
            lp.eq.push(([r.x.as_slice(), &r.y].concat(), r.rhs));
        }
        let s = lp_solve(&lp)?;
        match s.status {
            LpStatus::Optimal => Ok(s.value),
            st => Err(lp_status_error(st, "support")),
        }
    }

    /// `min t` subject to `x ∈ tK`, with the constraint rows homogenized.
    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        let p = self.aux.len();
        let mut obj = vec![0.0; p + 1];
        obj[p] = -1.0;
        let mut lp = LinearProgram::maximize(obj);
        for (j, a) in self.aux.iter().enumerate() {
            lp.bounds[j] = a.bound();
        }
        let row = |r: &Row| {
            let mut c = r.y.clone();
            c.push(-r.rhs);
            (c, -dot(&r.x, x))
        };
        lp.le = self.le.iter().map(row).collect();
        lp.eq = self.eq.iter().map(row).collect();
        let s = lp_solve(&lp)?;
        match s.status {
            LpStatus::Optimal => Ok((-s.value).max(0.0)),
            st => Err(lp_status_error(st, "gauge")),
        }
    }

    /// Largest `s ≥ 0` with `x + s d ∈ K` (requires `x ∈ K`).
    pub fn chord(&self, x: &[f64], d: &[f64]) -> Result<f64> {
        let p = self.aux.len();
        let mut obj = vec![0.0; p + 1];
        obj[0] = 1.0;
        let mut lp = LinearProgram::maximize(obj);
        for (j, a) in self.aux.iter().enumerate() {
            lp.bounds[j + 1] = a.bound();
        }
        let row = |r: &Row| {
            let mut c = vec![dot(&r.x, d)];
            c.extend_from_slice(&r.y);
            (c, r.rhs - dot(&r.x, x))
        };
        lp.le = self.le.iter().map(row).collect();
        lp.eq = self.eq.iter().map(row).collect();
        let s = lp_solve(&lp)?;
        match s.status {
            LpStatus::Optimal => Ok(s.value.max(0.0)),
            LpStatus::Infeasible => Ok(0.0),
            st => Err(lp_status_error(st, "chord")),
        }
    }

    pub fn reflect(&self) -> Self {
        self.map_rows(|r| Row { x: r.x.iter().map(|v| -v).collect(), y: r.y.clone(), rhs: r.rhs })
    }

    /// `T K` given `T⁻¹`.
    pub fn linear(&self, inverse: &Matrix) -> Self {
        let n = self.n;
        self.map_rows(|r| Row {
            x: (0..n).map(|j| (0..n).map(|i| r.x[i] * inverse[(i, j)]).sum()).collect(),
            y: r.y.clone(),
            rhs: r.rhs,
        })
    }

    pub fn translate(&self, z: &[f64]) -> Self {
        self.map_rows(|r| Row { x: r.x.clone(), y: r.y.clone(), rhs: r.rhs + dot(&r.x, z) })
    }

    /// `K ∩ H` in the coordinates `z` of `x = Bz`.
    pub fn section(&self, h: &Subspace) -> Self {
        let b = h.basis();
        let k = h.dim();
        let mut out = self.map_rows(|r| Row {
            x: (0..k).map(|j| (0..self.n).map(|i| r.x[i] * b[(i, j)]).sum()).collect(),
            y: r.y.clone(),
            rhs: r.rhs,
        });
        out.n = k;
        out
    }

    /// `P_H K` in subspace coordinates: the old `x` becomes an auxiliary free block.
    pub fn project(&self, h: &Subspace) -> Self {
        let n = self.n;
        let k = h.dim();
        let p = self.aux.len();
        let mut aux = vec![Aux::Free; n];
        aux.extend_from_slice(&self.aux);
        let lift = |r: &Row| Row { x: vec![0.0; k], y: [r.x.as_slice(), &r.y].concat(), rhs: r.rhs };
        let le = self.le.iter().map(lift).collect();
        let mut eq: Vec<Row> = self.eq.iter().map(lift).collect();
        let b = h.basis();
        for i in 0..k {
            let mut x = vec![0.0; k];
            x[i] = 1.0;
            let mut y: Vec<f64> = (0..n).map(|j| -b[(j, i)]).collect();
            y.extend(std::iter::repeat_n(0.0, p));
            eq.push(Row { x, y, rhs: 0.0 });
        }
        Self { n: k, aux, le, eq }
    }

    pub fn intersect(&self, other: &Lifted) -> Self {
        let (p, q) = (self.aux.len(), other.aux.len());
        let mine = |r: &Row| Row { x: r.x.clone(), y: pad(&r.y, 0, q), rhs: r.rhs };
        let theirs = |r: &Row| Row { x: r.x.clone(), y: pad(&r.y, p, 0), rhs: r.rhs };
        Self {
            n: self.n,
            aux: [self.aux.as_slice(), &other.aux].concat(),
            le: self.le.iter().map(mine).chain(other.le.iter().map(theirs)).collect(),
            eq: self.eq.iter().map(mine).chain(other.eq.iter().map(theirs)).collect(),
        }
    }

    /// `{x1 + x2 : x1 ∈ λK, x2 ∈ μL}` with `(λ, μ) = (s, 1 - s)` for the convex
    /// hull of the union, or `(1, 1)` for the Minkowski sum.
    fn combine(&self, other: &Lifted, union: bool) -> Self {
        let n = self.n;
        let (p, q) = (self.aux.len(), other.aux.len());
        // aux layout: x1 (free, n) | y1 (p) | y2 (q) | s (union only)
        let extra = usize::from(union);
        let mut aux = vec![Aux::Free; n];
        aux.extend_from_slice(&self.aux);
        aux.extend_from_slice(&other.aux);
        if union {
            aux.push(Aux::NonNeg);
        }
        let mine = |r: &Row| {
            let mut y = [r.x.as_slice(), &r.y].concat();
            y.extend(std::iter::repeat_n(0.0, q));
            if union {
                y.push(-r.rhs);
                Row { x: vec![0.0; n], y, rhs: 0.0 }
            } else {
                Row { x: vec![0.0; n], y, rhs: r.rhs }
            }
        };
        let theirs = |r: &Row| {
            let mut y: Vec<f64> = r.x.iter().map(|v| -v).collect();
            y.extend(std::iter::repeat_n(0.0, p));
            y.extend_from_slice(&r.y);
            if union {
                y.push(r.rhs);
            }
            Row { x: r.x.clone(), y, rhs: r.rhs }
        };
        let mut le: Vec<Row> = self.le.iter().map(mine).chain(other.le.iter().map(theirs)).collect();
        let eq = self.eq.iter().map(mine).chain(other.eq.iter().map(theirs)).collect();
        if union {
            let mut y = vec![0.0; n + p + q + extra];
            y[n + p + q] = 1.0;
            le.push(Row { x: vec![0.0; n], y, rhs: 1.0 });
        }
        Self { n, aux, le, eq }
    }

    pub fn conv_union(&self, other: &Lifted) -> Self {
        self.combine(other, true)
    }

    pub fn minkowski_sum(&self, other: &Lifted) -> Self {
        self.combine(other, false)
    }

    /// Polar body via LP duality:
    /// `K° = {u : ∃z ≥ 0, w, Aᵀz + Eᵀw = u, Bᵀz + Fᵀw ⪰ 0, bᵀz + dᵀw ≤ 1}`
    /// where `⪰` is `≥` on sign-constrained and `=` on free auxiliaries.
    pub fn polar(&self) -> Self {
        let n = self.n;
        let (ml, me) = (self.le.len(), self.eq.len());
        let mut aux = vec![Aux::NonNeg; ml];
        aux.extend(std::iter::repeat_n(Aux::Free, me));
        let rows: Vec<&Row> = self.rows().collect();
        let mut eq = Vec::new();
        let mut le = Vec::new();
        for i in 0..n {
            let mut x = vec![0.0; n];
            x[i] = -1.0;
            eq.push(Row { x, y: rows.iter().map(|r| r.x[i]).collect(), rhs: 0.0 });
        }
        for (j, a) in self.aux.iter().enumerate() {
            let y: Vec<f64> = rows.iter().map(|r| r.y[j]).collect();
            match a {
                Aux::Free => eq.push(Row { x: vec![0.0; n], y, rhs: 0.0 }),
                Aux::NonNeg => le.push(Row { x: vec![0.0; n], y: y.iter().map(|v| -v).collect(), rhs: 0.0 }),
            }
        }
        le.push(Row { x: vec![0.0; n], y: rows.iter().map(|r| r.rhs).collect(), rhs: 1.0 });
        Self { n, aux, le, eq }
    }

    pub fn size(&self) -> (usize, usize) {
        (self.le.len() + self.eq.len(), self.n + self.aux.len())
    }
}

/// A polyhedral body with optional vertex (`conv V`) or facet
/// (`{x : aᵢ·x ≤ 1}`) descriptions.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyhedron {
    pub(crate) lifted: Lifted,
    pub(crate) vertices: Option<Vec<Vec<f64>>>,
    pub(crate) facets: Option<Vec<Vec<f64>>>,
}

impl Polyhedron {
    pub fn from_vertices(vertices: Vec<Vec<f64>>) -> Self {
        Self { lifted: Lifted::from_vertices(&vertices), vertices: Some(vertices), facets: None }
    }

    pub fn from_facets(facets: Vec<Vec<f64>>) -> Self {
        Self { lifted: Lifted::from_facets(&facets), vertices: None, facets: Some(facets) }
    }

    fn general(lifted: Lifted) -> Self {
        Self { lifted, vertices: None, facets: None }
    }

    pub fn dim(&self) -> usize {
        self.lifted.n
    }

    pub fn vertices(&self) -> Option<&[Vec<f64>]> {
        self.vertices.as_deref()
    }

    pub fn facets(&self) -> Option<&[Vec<f64>]> {
        self.facets.as_deref()
    }

    /// Drops the vertex/facet caches so every operation uses the lifted LP route.
    pub fn lifted_only(&self) -> Self {
        Self::general(self.lifted.clone())
    }

    pub fn describe(&self) -> String {
        match (&self.vertices, &self.facets) {
            (Some(v), _) => format!("vpolytope[m={}]", v.len()),
            (_, Some(f)) => format!("hpolytope[m={}]", f.len()),
            _ => {
                let (r, c) = self.lifted.size();
                format!("lifted[{r}x{c}]")
            }
        }
    }

    pub fn support(&self, u: &[f64]) -> Result<f64> {
        if let Some(v) = &self.vertices {
            return Ok(v.iter().map(|p| dot(p, u)).fold(f64::NEG_INFINITY, f64::max));
        }
        self.lifted.support(u)
    }

    pub fn gauge(&self, x: &[f64]) -> Result<f64> {
        if let Some(a) = &self.facets {
            return Ok(a.iter().map(|r| dot(r, x)).fold(0.0, f64::max));
        }
        self.lifted.gauge(x)
    }

    pub fn chord(&self, x: &[f64], d: &[f64]) -> Result<f64> {
        if let Some(a) = &self.facets {
            let mut best = f64::INFINITY;
            for r in a {
                let ad = dot(r, d);
                if ad > 0.0 {
                    best = best.min(((1.0 - dot(r, x)) / ad).max(0.0));
                }
            }
            if best.is_infinite() {
                return Err(Error::DegenerateBody("unbounded facet description".into()));
            }
            return Ok(best);
        }
        self.lifted.chord(x, d)
    }

    pub fn polar(&self) -> Self {
        match (&self.vertices, &self.facets) {
            (Some(v), _) => Self::from_facets(v.clone()),
            (_, Some(a)) => Self::from_vertices(a.clone()),
            _ => Self::general(self.lifted.polar()),
        }
    }

    pub fn reflect(&self) -> Self {
        let neg = |s: &Vec<Vec<f64>>| s.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
        Self {
            lifted: self.lifted.reflect(),
            vertices: self.vertices.as_ref().map(neg),
            facets: self.facets.as_ref().map(neg),
        }
    }

    /// `conv(K ∪ -K)`.
    pub fn outer(&self) -> Self {
        if let Some(v) = &self.vertices {
            let mut all = v.clone();
            all.extend(v.iter().map(|p| p.iter().map(|x| -x).collect()));
            return Self::from_vertices(all);
        }
        Self::general(self.lifted.conv_union(&self.lifted.reflect()))
    }

    /// `K ∩ -K`.
    pub fn inner(&self) -> Self {
        if let Some(a) = &self.facets {
            let mut all = a.clone();
            all.extend(a.iter().map(|p| p.iter().map(|x| -x).collect()));
            return Self::from_facets(all);
        }
        Self::general(self.lifted.intersect(&self.lifted.reflect()))
    }

    /// `K - K`.
    pub fn difference(&self) -> Self {
        Self::general(self.lifted.minkowski_sum(&self.lifted.reflect()))
    }

    pub fn linear(&self, map: &Matrix, inverse: &Matrix) -> Self {
        let n = self.dim();
        let apply = |m: &Matrix, v: &Vec<f64>| (0..n).map(|i| (0..n).map(|j| m[(i, j)] * v[j]).sum()).collect();
        let apply_t = |m: &Matrix, v: &Vec<f64>| (0..n).map(|i| (0..n).map(|j| m[(j, i)] * v[j]).sum()).collect();
        Self {
            lifted: self.lifted.linear(inverse),
            vertices: self.vertices.as_ref().map(|vs| vs.iter().map(|v| apply(map, v)).collect()),
            facets: self.facets.as_ref().map(|fs| fs.iter().map(|a| apply_t(inverse, a)).collect()),
        }
    }

    pub fn translate(&self, z: &[f64]) -> Result<Self> {
        if let Some(v) = &self.vertices {
            return Ok(Self::from_vertices(
                v.iter().map(|p| p.iter().zip(z).map(|(a, b)| a + b).collect()).collect(),
            ));
        }
        if let Some(a) = &self.facets {
            let mut rows = Vec::with_capacity(a.len());
            for r in a {
                let s = 1.0 + dot(r, z);
                if s <= 0.0 {
                    return Err(Error::DegenerateBody("translation moves the origin outside the body".into()));
                }
                rows.push(r.iter().map(|v| v / s).collect());
            }
            return Ok(Self::from_facets(rows));
        }
        Ok(Self::general(self.lifted.translate(z)))
    }

    pub fn section(&self, h: &Subspace) -> Self {
        if let Some(a) = &self.facets {
            return Self::from_facets(a.iter().map(|r| h.coordinates(r)).collect());
        }
        Self::general(self.lifted.section(h))
    }

    pub fn project(&self, h: &Subspace) -> Self {
        if let Some(v) = &self.vertices {
            return Self::from_vertices(v.iter().map(|p| h.coordinates(p)).collect());
        }
        Self::general(self.lifted.project(h))
    }
}
