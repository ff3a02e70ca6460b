use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::iwasawa_ring::{IntPoly, LambdaElement, QuotientRing};
use crate::padic_linalg::{PAdicContext, ZpMatrix};

/// A matrix of exact polynomials, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    r: usize,
    rows: usize,
    cols: usize,
    entries: Vec<IntPoly>,
}

impl PolyMatrix {
    pub fn zeros(r: usize, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            r,
            rows,
            cols,
            entries: vec![IntPoly::zero(r); rows * cols],
        }
    }

    pub fn from_rows(r: usize, rows: Vec<Vec<IntPoly>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged polynomial matrix".into()));
        }
        if rows.iter().flatten().any(|f| f.r() != r) {
            return Err(Error::DimensionMismatch(format!("entries must be polynomials in {r} variables")));
        }
        Ok(PolyMatrix {
            r,
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Parses a grid of polynomial strings.
    pub fn parse(r: usize, p: u64, rows: &[Vec<String>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|s| IntPoly::parse(s, r, p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(r, parsed)
    }

    pub fn r(&self) -> usize {
        self.r
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &IntPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: IntPoly) {
        self.entries[i * self.cols + j] = f;
    }

    pub fn entries(&self) -> &[IntPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(IntPoly::is_zero)
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = PolyMatrix::zeros(self.r, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = IntPoly::zero(self.r);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn block_diagonal(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut out = PolyMatrix::zeros(self.r, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Reduction of every entry at a point `T = x`, in `ctx`.
    pub fn evaluate(&self, ctx: &PAdicContext, point: &[u64]) -> ZpMatrix {
        ZpMatrix::from_fn(ctx, self.rows, self.cols, |i, j| {
            let mut acc = 0;
            for (e, c) in self.get(i, j).terms() {
                let mut term = ctx.from_bigint(c);
                for (&x, &a) in point.iter().zip(e) {
                    term = ctx.mul(term, ctx.pow(x, a as u64));
                }
                acc = ctx.add(acc, term);
            }
            acc
        })
    }

    /// The `Zp`-matrix of this map after base change to `Λ̄_m`.
    pub fn expand(&self, ring: &QuotientRing) -> Result<ZpMatrix> {
        let ctx = ring.ctx();
        let dim = ring.dim();
        ctx.check_dimension(self.rows.max(self.cols) * dim)?;
        if self.rows == 0 || self.cols == 0 {
            return Ok(ZpMatrix::zeros(ctx, self.rows * dim, self.cols * dim));
        }
        let zero = ZpMatrix::zeros(ctx, dim, dim);
        let mut blocks = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                let f = self.get(i, j);
                if f.is_zero() {
                    row.push(zero.clone());
                } else {
                    row.push((*ring.multiplication_matrix(&LambdaElement::from_poly(ctx, f))?).clone());
                }
            }
            blocks.push(row);
        }
        Ok(ZpMatrix::from_blocks(ctx, &blocks, dim, dim))
    }
}

/// `maps[k]` is `d_{k+1}: P_{k+1} -> P_k`; `maps[0]` presents the module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeResolution {
    maps: Vec<PolyMatrix>,
}

impl FreeResolution {
    /// Checks shapes and that consecutive composites vanish exactly.
    pub fn new(maps: Vec<PolyMatrix>) -> Result<Self> {
        for (k, pair) in maps.windows(2).enumerate() {
            let (d_k, d_next) = (&pair[0], &pair[1]);
            if d_k.cols() != d_next.rows() {
                return Err(Error::InvalidResolution(format!(
                    "d_{} has {} columns but d_{} has {} rows",
                    k + 1,
                    d_k.cols(),
                    k + 2,
                    d_next.rows()
                )));
            }
            let composite = d_k.mul(d_next)?;
            if let Some(pos) = composite.entries().iter().position(|f| !f.is_zero()) {
                return Err(Error::ComplexNotComposable {
                    row: pos / composite.cols(),
                    col: pos % composite.cols(),
                    bound: 0,
                });
            }
        }
        Ok(FreeResolution { maps })
    }

    pub fn maps(&self) -> &[PolyMatrix] {
        &self.maps
    }

    /// Number of maps, i.e. the index of the last free module.
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    /// Rank of `P_k`.
    pub fn rank(&self, k: usize) -> usize {
        match k {
            0 => self.maps.first().map_or(0, PolyMatrix::rows),
            _ => self.maps.get(k - 1).map_or(0, PolyMatrix::cols),
        }
    }

    fn direct_sum(&self, other: &FreeResolution) -> FreeResolution {
        let r = self.maps.first().or(other.maps.first()).map_or(0, PolyMatrix::r);
        let len = self.length().max(other.length());
        let pad = |res: &FreeResolution, k: usize| -> PolyMatrix {
            res.maps
                .get(k)
                .cloned()
                .unwrap_or_else(|| PolyMatrix::zeros(r, res.rank(k), res.rank(k + 1)))
        };
        let maps = (0..len).map(|k| pad(self, k).block_diagonal(&pad(other, k))).collect();
        FreeResolution { maps }
    }
}

/// How a presentation was built; drives the compositional rules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Free { rank: usize },
    /// `Λ/(f^s)`
    Cyclic { f: IntPoly, s: u32 },
    /// `Λ/(f_1, ..., f_k)` on a declared regular sequence.
    Koszul { generators: Vec<IntPoly> },
    /// `Λ/(p^a)`
    PCyclic { a: u32 },
    DirectSum(Vec<Provenance>),
    Raw,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::Free { .. } => "free",
            Provenance::Cyclic { .. } => "cyclic",
            Provenance::Koszul { .. } => "koszul",
            Provenance::PCyclic { .. } => "p_cyclic",
            Provenance::DirectSum(_) => "direct_sum",
            Provenance::Raw => "raw",
        }
    }

    /// Pseudo-null by construction: Koszul on at least two elements, or a sum
    /// of such pieces.
    pub fn is_pseudo_null(&self) -> bool {
        match self {
            Provenance::Koszul { generators } => generators.len() >= 2,
            Provenance::DirectSum(parts) => parts.iter().all(Provenance::is_pseudo_null),
            _ => false,
        }
    }
}

/// `M = coker(A: Λ^a -> Λ^b)` with an optional free resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModulePresentation {
    p: u64,
    matrix: PolyMatrix,
    resolution: Option<FreeResolution>,
    provenance: Provenance,
}

fn check_prime(p: u64) -> Result<()> {
    if crate::padic_linalg::is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Index sets of size `j` from `0..k`, in lexicographic order.
fn subsets(k: usize, j: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..k {
            cur.push(i);
            go(i + 1, k, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::with_capacity(binomial(k, j));
    go(0, k, j, &mut Vec::new(), &mut out);
    out
}

/// Differentials of the Koszul complex on `gens`: `d_j: ∧^j -> ∧^{j-1}`.
pub(crate) fn koszul_maps(r: usize, gens: &[IntPoly]) -> Vec<PolyMatrix> {
    let k = gens.len();
    (1..=k)
        .map(|j| {
            let src = subsets(k, j);
            let dst = subsets(k, j - 1);
            let mut d = PolyMatrix::zeros(r, dst.len(), src.len());
            for (col, s) in src.iter().enumerate() {
                for (pos, &drop) in s.iter().enumerate() {
                    let face: Vec<usize> = s.iter().copied().filter(|&x| x != drop).collect();
                    let row = dst.iter().position(|t| *t == face).expect("face");
                    let g = if pos % 2 == 0 { gens[drop].clone() } else { gens[drop].neg() };
                    d.set(row, col, g);
                }
            }
            d
        })
        .collect()
}

impl ModulePresentation {
    /// `Λ_r^s`.
    pub fn free(r: usize, s: usize, p: u64) -> Result<Self> {
        check_prime(p)?;
        let matrix = PolyMatrix::zeros(r, s, 0);
        Ok(ModulePresentation {
            p,
            resolution: Some(FreeResolution { maps: vec![matrix.clone()] }),
            matrix,
            provenance: Provenance::Free { rank: s },
        })
    }

    /// `Λ_r/(f^s)`, with its length-one resolution.
    pub fn cyclic(f: IntPoly, s: u32, p: u64) -> Result<Self> {
        check_prime(p)?;
        if f.is_zero() || s == 0 {
            return Err(Error::InvalidInput("cyclic module needs f != 0 and s >= 1".into()));
        }
        let r = f.r();
        let matrix = PolyMatrix::from_rows(r, vec![vec![f.pow(s as u64)]])?;
        Ok(ModulePresentation {
            p,
            resolution: Some(FreeResolution { maps: vec![matrix.clone()] }),
            matrix,
            provenance: Provenance::Cyclic { f, s },
        })
    }

    /// `Λ_r/(p^a)`.
    pub fn p_cyclic(r: usize, a: u32, p: u64) -> Result<Self> {
        let mut m = Self::cyclic(IntPoly::constant(r, BigInt::from(p).pow(a)), 1, p)?;
        m.provenance = Provenance::PCyclic { a };
        Ok(m)
    }

    /// `Λ_r/(f_1, ..., f_k)` resolved by the Koszul complex.
    ///
    /// The sequence is trusted to be regular; only nonvanishing, the length
    /// bound `k <= r + 1` and `d ∘ d = 0` are checked.
    pub fn koszul(r: usize, generators: Vec<IntPoly>, p: u64) -> Result<Self> {
        check_prime(p)?;
        if generators.is_empty() || generators.len() > r + 1 {
            return Err(Error::InvalidResolution(format!(
                "Koszul complex on {} elements in {r} variables",
                generators.len()
            )));
        }
        if generators.iter().any(|g| g.is_zero() || g.r() != r) {
            return Err(Error::InvalidResolution("zero or mis-sized generator".into()));
        }
        let resolution = FreeResolution::new(koszul_maps(r, &generators))?;
        Ok(ModulePresentation {
            p,
            matrix: resolution.maps[0].clone(),
            resolution: Some(resolution),
            provenance: Provenance::Koszul { generators },
        })
    }

    /// Block sum of the parts; the resolution survives only if every part has one.
    pub fn direct_sum(parts: &[ModulePresentation]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
        if parts.iter().any(|m| m.p != first.p || m.r() != first.r()) {
            return Err(Error::DimensionMismatch("direct sum of modules over different rings".into()));
        }
        let mut matrix = PolyMatrix::zeros(first.r(), 0, 0);
        let mut resolution = Some(FreeResolution { maps: Vec::new() });
        for part in parts {
            matrix = matrix.block_diagonal(&part.matrix);
            resolution = match (resolution, &part.resolution) {
                (Some(acc), Some(res)) => Some(acc.direct_sum(res)),
                _ => None,
            };
        }
        Ok(ModulePresentation {
            p: first.p,
            matrix,
            resolution,
            provenance: Provenance::DirectSum(parts.iter().map(|m| m.provenance.clone()).collect()),
        })
    }

    /// A bare presentation; homology beyond degree 1 is unavailable.
    pub fn raw(matrix: PolyMatrix, p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(ModulePresentation {
            p,
            matrix,
            resolution: None,
            provenance: Provenance::Raw,
        })
    }

    /// Attaches a user-supplied resolution whose first map must be the
    /// presentation matrix.
    pub fn with_resolution(mut self, resolution: FreeResolution) -> Result<Self> {
        if resolution.maps.first() != Some(&self.matrix) {
            return Err(Error::InvalidResolution("first map must equal the presentation matrix".into()));
        }
        if resolution.length() > self.r() + 1 {
            return Err(Error::InvalidResolution(format!(
                "length {} exceeds r + 1 = {}",
                resolution.length(),
                self.r() + 1
            )));
        }
        self.resolution = Some(resolution);
        Ok(self)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn r(&self) -> usize {
        self.matrix.r()
    }
    /// Number of relations.
    pub fn a(&self) -> usize {
        self.matrix.cols()
    }
    /// Number of generators.
    pub fn b(&self) -> usize {
        self.matrix.rows()
    }
    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }
    pub fn resolution(&self) -> Option<&FreeResolution> {
        self.resolution.as_ref()
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub(crate) fn check_context(&self, ctx: &PAdicContext) -> Result<()> {
        if ctx.p() != self.p {
            return Err(Error::InvalidInput(format!(
                "module over Z_{} used with a context for p = {}",
                self.p,
                ctx.p()
            )));
        }
        Ok(())
    }
}
