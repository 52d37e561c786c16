//! Condenser capacity on lattices.
//!
//! A condenser (A, C) is discretised on a box lattice of cell size h. Every
//! node carries a class: `InC` nodes hold potential 1, `Outside` nodes hold 0
//! and `InA` nodes are free. The capacity estimate is the minimum of the
//! discrete n-energy
//!
//! ```text
//! E(u) = Σ_p |∇u(p)|ⁿ hⁿ = Σ_p (Σ_k (u(p + e_k) − u(p))²)^{n/2}
//! ```
//!
//! over the free values (forward differences, one cell per node). For n = 2
//! this is the 5-point Dirichlet energy. Minimisation is nonlinear successive
//! over-relaxation in lexicographic order, started from a coarse-to-fine
//! cascade.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::constants::unit_sphere_area;
use crate::error::{arg, Error, Result};
use crate::geometry::{Point, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellClass {
    InC,
    InA,
    Outside,
}

impl CellClass {
    fn token(self) -> char {
        match self {
            CellClass::InC => 'C',
            CellClass::InA => 'A',
            CellClass::Outside => 'O',
        }
    }

    fn fixed_value(self) -> f64 {
        if self == CellClass::InC {
            1.0
        } else {
            0.0
        }
    }
}

/// Lattice discretisation of a condenser. Nodes are stored row-major (last
/// axis fastest); every node on the faces of the box is `Outside`.
#[derive(Clone, Debug, PartialEq)]
pub struct CondenserGrid {
    n: usize,
    cell_size: f64,
    dims: Vec<usize>,
    cells: Vec<CellClass>,
}

impl CondenserGrid {
    pub fn new(n: usize, cell_size: f64, dims: Vec<usize>, cells: Vec<CellClass>) -> Result<Self> {
        if n < 2 {
            return arg(format!("dimension must be at least 2, got {n}"));
        }
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return arg(format!("cell size must be positive, got {cell_size}"));
        }
        if dims.len() != n {
            return arg(format!("expected {n} lattice extents, got {}", dims.len()));
        }
        if dims.iter().any(|&d| d < 3) {
            return arg("every lattice extent must be at least 3");
        }
        let total: usize = dims.iter().product();
        if cells.len() != total {
            return arg(format!("expected {total} cells, got {}", cells.len()));
        }
        let grid = CondenserGrid { n, cell_size, dims, cells };
        if !grid.cells.contains(&CellClass::InC) {
            return arg("condenser has no C cells");
        }
        let mut idx = vec![0usize; n];
        for (i, c) in grid.cells.iter().enumerate() {
            grid.unravel(i, &mut idx);
            if grid.on_face(&idx) && *c != CellClass::Outside {
                return arg(format!("boundary node {idx:?} of the box must be outside A"));
            }
        }
        Ok(grid)
    }

    /// Classifies node i at position `origin + i·h` with `classify`; nodes on
    /// the faces of the box are set to `Outside` regardless.
    pub fn from_fn(
        n: usize,
        cell_size: f64,
        dims: Vec<usize>,
        origin: &[f64],
        classify: impl Fn(&[f64]) -> CellClass,
    ) -> Result<Self> {
        if origin.len() != n || dims.len() != n {
            return arg("origin and extents must match the dimension");
        }
        let total: usize = dims.iter().product();
        let probe = CondenserGrid { n, cell_size, dims: dims.clone(), cells: Vec::new() };
        let mut idx = vec![0usize; n];
        let mut x = vec![0.0; n];
        let cells = (0..total)
            .map(|i| {
                probe.unravel(i, &mut idx);
                if probe.on_face(&idx) {
                    return CellClass::Outside;
                }
                for k in 0..n {
                    x[k] = origin[k] + idx[k] as f64 * cell_size;
                }
                classify(&x)
            })
            .collect();
        CondenserGrid::new(n, cell_size, dims, cells)
    }

    /// Spherical ring {inner ≤ |x| ≤ outer} centred at the origin: nodes with
    /// |x| ≤ inner are C, nodes with |x| ≥ outer are outside A.
    pub fn ring(n: usize, inner: f64, outer: f64, cell_size: f64) -> Result<Self> {
        if !(inner > 0.0 && outer > inner) {
            return arg(format!("ring radii must satisfy 0 < inner < outer, got ({inner}, {outer})"));
        }
        let half = (outer / cell_size).ceil() as usize + 1;
        let dims = vec![2 * half + 1; n];
        let origin = vec![-(half as f64) * cell_size; n];
        CondenserGrid::from_fn(n, cell_size, dims, &origin, |x| {
            let r = x.iter().map(|c| c * c).sum::<f64>().sqrt();
            if r <= inner {
                CellClass::InC
            } else if r >= outer {
                CellClass::Outside
            } else {
                CellClass::InA
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn cells(&self) -> &[CellClass] {
        &self.cells
    }

    pub fn count(&self, class: CellClass) -> usize {
        self.cells.iter().filter(|&&c| c == class).count()
    }

    /// Turns the `InA` node at `idx` into a C node.
    pub fn mark_c(&mut self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.n || idx.iter().zip(&self.dims).any(|(i, d)| i >= d) {
            return arg(format!("node {idx:?} is outside the lattice"));
        }
        let lin = self.ravel(idx);
        if self.cells[lin] == CellClass::Outside {
            return arg(format!("node {idx:?} is outside A"));
        }
        self.cells[lin] = CellClass::InC;
        Ok(())
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.n];
        for k in (0..self.n - 1).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    fn unravel(&self, mut i: usize, out: &mut [usize]) {
        for k in (0..self.n).rev() {
            out[k] = i % self.dims[k];
            i /= self.dims[k];
        }
    }

    fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.dims).fold(0, |acc, (i, d)| acc * d + i)
    }

    fn on_face(&self, idx: &[usize]) -> bool {
        idx.iter().zip(&self.dims).any(|(&i, &d)| i == 0 || i == d - 1)
    }

    /// Flat text form: header `n cell_size dims...`, then one token per node
    /// (`C`, `A`, `O`) in row-major order, one lattice row per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = write!(out, "{} {}", self.n, self.cell_size);
        for d in &self.dims {
            let _ = write!(out, " {d}");
        }
        out.push('\n');
        let row = self.dims[self.n - 1];
        for chunk in self.cells.chunks(row) {
            let line: Vec<String> = chunk.iter().map(|c| c.token().to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let perr = |msg: String| Error::Parse { line: hline + 1, msg };
        if fields.len() < 2 {
            return Err(perr("header must read `n cell_size dims...`".into()));
        }
        let n: usize = fields[0].parse().map_err(|_| perr(format!("bad dimension '{}'", fields[0])))?;
        let cell_size: f64 = fields[1].parse().map_err(|_| perr(format!("bad cell size '{}'", fields[1])))?;
        let dims = fields[2..]
            .iter()
            .map(|f| f.parse::<usize>().map_err(|_| perr(format!("bad extent '{f}'"))))
            .collect::<Result<Vec<_>>>()?;
        if dims.len() != n {
            return Err(perr(format!("expected {n} extents, got {}", dims.len())));
        }
        let mut cells = Vec::with_capacity(dims.iter().product());
        for (lno, line) in lines {
            for tok in line.split_whitespace() {
                cells.push(match tok {
                    "C" => CellClass::InC,
                    "A" => CellClass::InA,
                    "O" => CellClass::Outside,
                    other => return Err(Error::Parse { line: lno + 1, msg: format!("unknown cell token '{other}'") }),
                });
            }
        }
        CondenserGrid::new(n, cell_size, dims, cells)
    }

    /// Coarser lattice by injection (coarse node I is fine node 2I), or
    /// `None` when it would be too small or lose C.
    fn coarsen(&self) -> Option<CondenserGrid> {
        if self.dims.iter().any(|&d| d < 9) {
            return None;
        }
        let cdims: Vec<usize> = self.dims.iter().map(|&d| d.div_ceil(2)).collect();
        let probe = CondenserGrid { n: self.n, cell_size: 2.0 * self.cell_size, dims: cdims.clone(), cells: Vec::new() };
        let total: usize = cdims.iter().product();
        let mut idx = vec![0usize; self.n];
        let mut fine = vec![0usize; self.n];
        let cells: Vec<CellClass> = (0..total)
            .map(|i| {
                probe.unravel(i, &mut idx);
                if probe.on_face(&idx) {
                    return CellClass::Outside;
                }
                for k in 0..self.n {
                    fine[k] = 2 * idx[k];
                }
                self.cells[self.ravel(&fine)]
            })
            .collect();
        if !cells.contains(&CellClass::InC) {
            return None;
        }
        Some(CondenserGrid { cells, ..probe })
    }

    fn initial_potential(&self) -> Vec<f64> {
        self.cells.iter().map(|c| c.fixed_value()).collect()
    }

    /// Multilinear interpolation of a coarse potential onto this lattice.
    fn prolongate(&self, coarse: &CondenserGrid, cu: &[f64]) -> Vec<f64> {
        let n = self.n;
        let cstr = coarse.strides();
        let mut idx = vec![0usize; n];
        let mut u = self.initial_potential();
        for (i, c) in self.cells.iter().enumerate() {
            if *c != CellClass::InA {
                continue;
            }
            self.unravel(i, &mut idx);
            let mut acc = 0.0;
            for corner in 0..(1usize << n) {
                let mut w = 1.0;
                let mut lin = 0;
                for k in 0..n {
                    let base = idx[k] / 2;
                    let odd = idx[k] % 2 == 1;
                    let up = (corner >> k) & 1 == 1;
                    let (ck, wk) = match (odd, up) {
                        (false, false) => (base, 1.0),
                        (false, true) => (base, 0.0),
                        (true, false) => (base, 0.5),
                        (true, true) => ((base + 1).min(coarse.dims[k] - 1), 0.5),
                    };
                    w *= wk;
                    lin += ck * cstr[k];
                }
                if w > 0.0 {
                    acc += w * cu[lin];
                }
            }
            u[i] = acc;
        }
        u
    }

    /// Discrete n-energy of `u`.
    pub fn energy(&self, u: &[f64]) -> Result<f64> {
        if u.len() != self.cells.len() {
            return arg(format!("potential has {} values for {} nodes", u.len(), self.cells.len()));
        }
        let strides = self.strides();
        let q = self.n as f64 / 2.0;
        let mut idx = vec![0usize; self.n];
        let mut e = 0.0;
        for i in 0..u.len() {
            self.unravel(i, &mut idx);
            if idx.iter().zip(&self.dims).any(|(&a, &d)| a + 1 == d) {
                continue;
            }
            let s: f64 = strides.iter().map(|&st| (u[i + st] - u[i]).powi(2)).sum();
            e += if self.n == 2 { s } else { s.powf(q) };
        }
        Ok(e)
    }
}

/// Solver parameters of [`capacity_estimate_with`].
#[derive(Clone, Debug)]
pub struct SolverConfig {
    /// Relative energy decrease per sweep below which the solve stops.
    pub tol: f64,
    /// Sweep cap per lattice level.
    pub max_sweeps: usize,
    /// Over-relaxation factor; `None` picks one from the lattice size.
    pub omega: Option<f64>,
    /// Start from the solution on a coarsened lattice.
    pub cascade: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tol: 1e-7, max_sweeps: 20_000, omega: None, cascade: true }
    }
}

/// Result of a capacity solve.
#[derive(Clone, Debug)]
pub struct CapacitySolution {
    pub capacity: f64,
    pub potential: Vec<f64>,
    /// Sweeps on the finest lattice.
    pub sweeps: usize,
}

/// Exact capacity ω_{n−1} (log(outer/inner))^{1−n} of the spherical ring.
pub fn ring_capacity_exact(n: usize, inner: f64, outer: f64) -> Result<f64> {
    if n < 2 {
        return arg(format!("dimension must be at least 2, got {n}"));
    }
    if !(inner > 0.0 && outer > inner && outer.is_finite()) {
        return arg(format!("ring radii must satisfy 0 < inner < outer, got ({inner}, {outer})"));
    }
    if n == 2 {
        return Ok(2.0 * PI / (outer / inner).ln());
    }
    Ok(unit_sphere_area(n - 1) * (outer / inner).ln().powi(1 - n as i32))
}

/// Capacity estimate with relative sweep tolerance `tol`.
pub fn capacity_estimate(grid: &CondenserGrid, tol: f64) -> Result<f64> {
    let cfg = SolverConfig { tol, ..SolverConfig::default() };
    Ok(capacity_estimate_with(grid, &cfg)?.capacity)
}

pub fn capacity_estimate_with(grid: &CondenserGrid, cfg: &SolverConfig) -> Result<CapacitySolution> {
    if !(cfg.tol > 0.0) {
        return arg(format!("tolerance must be positive, got {}", cfg.tol));
    }
    let mut chain = vec![grid.clone()];
    if cfg.cascade {
        while let Some(c) = chain.last().and_then(CondenserGrid::coarsen) {
            chain.push(c);
        }
    }
    let mut u = chain.last().map(CondenserGrid::initial_potential).unwrap_or_default();
    let mut sweeps = 0;
    for level in (0..chain.len()).rev() {
        if level + 1 < chain.len() {
            u = chain[level].prolongate(&chain[level + 1], &u);
        }
        sweeps = relax(&chain[level], &mut u, cfg)?;
    }
    let capacity = grid.energy(&u)?;
    Ok(CapacitySolution { capacity, potential: u, sweeps })
}

/// The terms of the energy that involve one free node p: its own cell, with
/// forward values a_k = u(p + e_k), and the cells p − e_k, with values
/// b_k = u(p − e_k) and the frozen part s_k of their squared gradient.
struct LocalStencil<const N: usize> {
    a: [f64; N],
    b: [f64; N],
    s: [f64; N],
}

/// (x^{N/2}, x^{N/2 − 1}).
#[inline]
fn half_powers<const N: usize>(x: f64) -> (f64, f64) {
    match N {
        2 => (x, 1.0),
        3 => {
            let r = x.sqrt();
            (x * r, r)
        }
        4 => (x * x, x),
        _ => {
            let p = x.powf(N as f64 / 2.0 - 1.0);
            (p * x, p)
        }
    }
}

impl<const N: usize> LocalStencil<N> {
    #[inline]
    fn gather(u: &[f64], i: usize, strides: &[usize; N]) -> Self {
        let mut a = [0.0; N];
        let mut b = [0.0; N];
        let mut s = [0.0; N];
        for k in 0..N {
            a[k] = u[i + strides[k]];
            let bk = u[i - strides[k]];
            b[k] = bk;
            let base = i - strides[k];
            let mut acc = 0.0;
            for (j, &sj) in strides.iter().enumerate() {
                if j != k {
                    let d = u[base + sj] - bk;
                    acc += d * d;
                }
            }
            s[k] = acc;
        }
        LocalStencil { a, b, s }
    }

    #[inline]
    fn value(&self, v: f64) -> f64 {
        let mut big_a = 0.0;
        for &ak in &self.a {
            big_a += (ak - v) * (ak - v);
        }
        let mut f = half_powers::<N>(big_a).0;
        for k in 0..N {
            let d = v - self.b[k];
            f += half_powers::<N>(d * d + self.s[k]).0;
        }
        f
    }

    /// First and second derivative of the local energy at `v`.
    #[inline]
    fn derivatives(&self, v: f64) -> (f64, f64) {
        let q = N as f64 / 2.0;
        let mut big_a = 0.0;
        let mut da = 0.0;
        for &ak in &self.a {
            big_a += (ak - v) * (ak - v);
            da -= 2.0 * (ak - v);
        }
        let mut f1 = 0.0;
        let mut f2 = 0.0;
        let mut term = |x: f64, dx: f64, ddx: f64| {
            if x <= 1e-300 {
                return;
            }
            let p = half_powers::<N>(x).1;
            f1 += q * p * dx;
            f2 += q * p * ddx + q * (q - 1.0) * p / x * dx * dx;
        };
        term(big_a, da, 2.0 * N as f64);
        for k in 0..N {
            let d = v - self.b[k];
            term(d * d + self.s[k], 2.0 * d, 2.0);
        }
        (f1, f2)
    }

    /// Minimiser of the local energy by safeguarded Newton; it lies between
    /// the smallest and largest neighbour value.
    fn minimise(&self, start: f64) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &v in self.a.iter().chain(&self.b) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi - lo <= 0.0 {
            return lo;
        }
        let mut v = start.clamp(lo, hi);
        for _ in 0..60 {
            let (f1, f2) = self.derivatives(v);
            if f1 == 0.0 {
                return v;
            }
            if f1 > 0.0 {
                hi = v;
            } else {
                lo = v;
            }
            let mut next = if f2 > 0.0 { v - f1 / f2 } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - v).abs() <= 1e-13 || hi - lo <= 1e-15 {
                return next;
            }
            v = next;
        }
        v
    }
}

/// SOR sweeps to convergence on one lattice; returns the sweep count.
fn relax(grid: &CondenserGrid, u: &mut [f64], cfg: &SolverConfig) -> Result<usize> {
    match grid.n {
        2 => relax_n::<2>(grid, u, cfg),
        3 => relax_n::<3>(grid, u, cfg),
        4 => relax_n::<4>(grid, u, cfg),
        5 => relax_n::<5>(grid, u, cfg),
        6 => relax_n::<6>(grid, u, cfg),
        n => arg(format!("the lattice solver supports n ≤ 6, got {n}")),
    }
}

fn relax_n<const N: usize>(grid: &CondenserGrid, u: &mut [f64], cfg: &SolverConfig) -> Result<usize> {
    let mut strides = [0usize; N];
    strides.copy_from_slice(&grid.strides());
    let free: Vec<usize> = (0..u.len()).filter(|&i| grid.cells[i] == CellClass::InA).collect();
    if free.is_empty() {
        return Ok(0);
    }
    let m = *grid.dims.iter().max().unwrap_or(&3) as f64;
    let omega = cfg.omega.unwrap_or_else(|| 2.0 / (1.0 + (PI / (m - 1.0)).sin())).clamp(1.0, 1.99);
    let mut energy = grid.energy(u)?;
    let mut previous = energy;
    for sweep in 1..=cfg.max_sweeps {
        let mut change = 0.0;
        for &i in &free {
            let old = u[i];
            if N == 2 {
                let sum = u[i + strides[0]] + u[i - strides[0]] + u[i + strides[1]] + u[i - strides[1]];
                let target = 0.25 * sum;
                let new = (old + omega * (target - old)).clamp(0.0, 1.0);
                // local energy 4v² − 2v·sum + const
                change += 4.0 * (new * new - old * old) - 2.0 * sum * (new - old);
                u[i] = new;
                continue;
            }
            let st = LocalStencil::<N>::gather(u, i, &strides);
            let target = st.minimise(old);
            let f_old = st.value(old);
            let over = (old + omega * (target - old)).clamp(0.0, 1.0);
            let f_over = st.value(over);
            let (new, f_new) = if f_over <= f_old { (over, f_over) } else { (target, st.value(target)) };
            if f_new <= f_old {
                change += f_new - f_old;
                u[i] = new;
            }
        }
        energy += change;
        if sweep % 64 == 0 {
            energy = grid.energy(u)?;
        }
        if -change <= cfg.tol * energy.abs() {
            return Ok(sweep);
        }
        previous = energy;
    }
    Err(Error::Convergence { what: "capacity solve", last: energy, previous })
}

/// Which points of E mark C inside B̄(b, r).
pub enum CondenserSet<'a> {
    /// Lattice nodes inside the region.
    Region(&'a dyn Region),
    /// The lattice node nearest to each point.
    Points(&'a [Point]),
}

/// Estimated M(E, r, b) per radius.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityProfile {
    pub center: Point,
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
    /// True where C was empty at lattice scale (value recorded as 0).
    pub empty: Vec<bool>,
}

/// Capacity-density profile r ↦ cap(B(b, 2r), B̄(b, r) ∩ E) on lattices with
/// `resolution` cells across B(b, 2r).
pub fn cap_density_profile(set: CondenserSet<'_>, b: &Point, radii: &[f64], resolution: usize) -> Result<DensityProfile> {
    cap_density_profile_with(set, b, radii, resolution, &SolverConfig::default())
}

pub fn cap_density_profile_with(
    set: CondenserSet<'_>,
    b: &Point,
    radii: &[f64],
    resolution: usize,
    cfg: &SolverConfig,
) -> Result<DensityProfile> {
    if resolution < 16 {
        return arg(format!("resolution must be at least 16 cells across, got {resolution}"));
    }
    if radii.is_empty() {
        return arg("no radii given");
    }
    if radii.iter().any(|&r| !(r > 0.0 && r.is_finite())) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return arg("radii must be positive and strictly decreasing");
    }
    let n = b.dim();
    match &set {
        CondenserSet::Region(reg) if reg.dim() != n => return arg("region dimension differs from the centre"),
        CondenserSet::Points(ps) => {
            for p in ps.iter() {
                p.check_dim(n)?;
            }
        }
        _ => {}
    }
    let mut values = Vec::with_capacity(radii.len());
    let mut empty = Vec::with_capacity(radii.len());
    for &r in radii {
        let h = 4.0 * r / resolution as f64;
        let half = resolution / 2 + 1;
        let dims = vec![2 * half + 1; n];
        let origin: Vec<f64> = b.coords().iter().map(|c| c - half as f64 * h).collect();
        let bc = b.coords().to_vec();
        let classify = |x: &[f64]| {
            let d = crate::geometry::dist(x, &bc);
            if d >= 2.0 * r {
                return CellClass::Outside;
            }
            if d <= r {
                if let CondenserSet::Region(reg) = &set {
                    if reg.contains(&Point::from_vec_unchecked(x.to_vec())) {
                        return CellClass::InC;
                    }
                }
            }
            CellClass::InA
        };
        let total: usize = dims.iter().product();
        let probe = CondenserGrid { n, cell_size: h, dims: dims.clone(), cells: Vec::new() };
        let mut idx = vec![0usize; n];
        let mut x = vec![0.0; n];
        let mut cells: Vec<CellClass> = (0..total)
            .map(|i| {
                probe.unravel(i, &mut idx);
                if probe.on_face(&idx) {
                    return CellClass::Outside;
                }
                for k in 0..n {
                    x[k] = origin[k] + idx[k] as f64 * h;
                }
                classify(&x)
            })
            .collect();
        if let CondenserSet::Points(ps) = &set {
            for p in ps.iter() {
                if p.dist(b) > r {
                    continue;
                }
                for k in 0..n {
                    let t = ((p.coords()[k] - origin[k]) / h).round();
                    idx[k] = t.clamp(0.0, (dims[k] - 1) as f64) as usize;
                }
                let lin = probe.ravel(&idx);
                if cells[lin] == CellClass::InA {
                    cells[lin] = CellClass::InC;
                }
            }
        }
        if !cells.contains(&CellClass::InC) {
            values.push(0.0);
            empty.push(true);
            continue;
        }
        let grid = CondenserGrid::new(n, h, dims, cells)?;
        values.push(capacity_estimate_with(&grid, cfg)?.capacity);
        empty.push(false);
    }
    Ok(DensityProfile { center: b.clone(), radii: radii.to_vec(), values, empty })
}
