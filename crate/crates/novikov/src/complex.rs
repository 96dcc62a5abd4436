//! Finite Δ-complexes, edge cocycles, and the equivariant chain complex of
//! the free abelian cover a cocycle determines.
//!
//! Cells are semi-simplicial: every k-cell carries an ordered (k+1)-tuple of
//! face references into dimension k−1, with loops and repeated faces allowed.
//! The face maps must satisfy the simplicial identity d_i d_j = d_{j−1} d_i
//! for i < j, which is what makes the alternating-sign boundary square to
//! zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::{ExponentVec, LaurentPoly};
use crate::linalg::{self, QMatrix};
use crate::rank::LaurentMatrix;

/// A finite Δ-complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaComplex {
    num_vertices: usize,
    /// cells[k−1][c] = ordered faces [d₀, …, d_k] of the c-th k-cell.
    cells: Vec<Vec<Vec<usize>>>,
}

impl DeltaComplex {
    /// Builds and validates a complex from its face tables. `cells[k-1]`
    /// lists the k-cells; trailing empty dimensions are trimmed so equal
    /// complexes compare equal.
    pub fn from_cells(num_vertices: usize, mut cells: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        while cells.last().map(Vec::is_empty).unwrap_or(false) {
            cells.pop();
        }
        let complex = DeltaComplex {
            num_vertices,
            cells,
        };
        complex.validate()?;
        Ok(complex)
    }

    pub fn dimension(&self) -> usize {
        self.cells.len()
    }

    pub fn num_cells(&self, k: usize) -> usize {
        if k == 0 {
            self.num_vertices
        } else {
            self.cells.get(k - 1).map_or(0, Vec::len)
        }
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        (0..=self.dimension()).map(|k| self.num_cells(k)).collect()
    }

    /// Ordered faces of a k-cell, k ≥ 1.
    pub fn faces(&self, k: usize, cell: usize) -> &[usize] {
        &self.cells[k - 1][cell]
    }

    pub fn euler(&self) -> i64 {
        self.cell_counts()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Re-checks every structural invariant: face arities, face ranges, the
    /// simplicial identities, and ∂∘∂ = 0 over ℤ.
    pub fn validate(&self) -> Result<()> {
        for k in 1..=self.dimension() {
            let below = self.num_cells(k - 1);
            for (c, faces) in self.cells[k - 1].iter().enumerate() {
                if faces.len() != k + 1 {
                    return Err(Error::FaceArity {
                        dim: k,
                        cell: c,
                        got: faces.len(),
                        need: k + 1,
                    });
                }
                for (slot, &f) in faces.iter().enumerate() {
                    if f >= below {
                        return Err(Error::MalformedFace {
                            dim: k,
                            cell: c,
                            slot,
                            face: f,
                            available: below,
                        });
                    }
                }
            }
        }
        for k in 2..=self.dimension() {
            for (c, faces) in self.cells[k - 1].iter().enumerate() {
                for j in 1..=k {
                    for i in 0..j {
                        // d_i d_j = d_{j−1} d_i
                        let left = self.faces(k - 1, faces[j])[i];
                        let right = self.faces(k - 1, faces[i])[j - 1];
                        if left != right {
                            return Err(Error::SimplicialIdentity {
                                dim: k,
                                cell: c,
                                i,
                                j,
                            });
                        }
                    }
                }
            }
        }
        // ∂∘∂ = 0 follows from the identities, but assert it directly.
        for k in 2..=self.dimension() {
            for c in 0..self.num_cells(k) {
                let mut acc = vec![0i64; self.num_cells(k - 2)];
                for (i, &f) in self.faces(k, c).iter().enumerate() {
                    let si = if i % 2 == 0 { 1 } else { -1 };
                    for (j, &g) in self.faces(k - 1, f).iter().enumerate() {
                        let sj = if j % 2 == 0 { 1 } else { -1 };
                        acc[g] += si * sj;
                    }
                }
                if acc.iter().any(|&x| x != 0) {
                    return Err(Error::BoundarySquare { dim: k, cell: c });
                }
            }
        }
        Ok(())
    }

    /// The ordinary integral boundary matrix ∂_k over ℚ,
    /// shape (#(k−1)-cells) × (#k-cells), for 1 ≤ k ≤ dimension.
    pub fn boundary_matrix_int(&self, k: usize) -> QMatrix {
        let rows = self.num_cells(k - 1);
        let cols = self.num_cells(k);
        let mut m = vec![vec![BigRational::zero(); cols]; rows];
        for c in 0..cols {
            for (i, &f) in self.faces(k, c).iter().enumerate() {
                let sign = if i % 2 == 0 {
                    BigRational::one()
                } else {
                    -BigRational::one()
                };
                m[f][c] += sign;
            }
        }
        m
    }

    /// The edge spanned by the first two vertices of a k-cell (k ≥ 1):
    /// the iterated last face d₂…d_k, whose weight twists the lifted d₀.
    pub fn leading_edge(&self, k: usize, cell: usize) -> usize {
        assert!(k >= 1, "vertices have no leading edge");
        let mut dim = k;
        let mut cur = cell;
        while dim > 1 {
            cur = self.faces(dim, cur)[dim];
            dim -= 1;
        }
        cur
    }

    /// Head vertex of an edge (the face opposite vertex 0).
    pub fn edge_head(&self, edge: usize) -> usize {
        self.faces(1, edge)[0]
    }

    /// Tail vertex of an edge (the face opposite vertex 1).
    pub fn edge_tail(&self, edge: usize) -> usize {
        self.faces(1, edge)[1]
    }
}

/// An edge cocycle with values in ℚʳ: the combinatorial form whose class
/// determines the free abelian cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    rank: usize,
    values: Vec<Vec<BigRational>>,
}

impl Cocycle {
    pub fn new(rank: usize, values: Vec<Vec<BigRational>>) -> Result<Self> {
        for v in &values {
            if v.len() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: v.len(),
                });
            }
        }
        Ok(Cocycle { rank, values })
    }

    pub fn zero(rank: usize, num_edges: usize) -> Self {
        Cocycle {
            rank,
            values: vec![vec![BigRational::zero(); rank]; num_edges],
        }
    }

    pub fn from_integers(rank: usize, values: Vec<Vec<i64>>) -> Result<Self> {
        let values = values
            .into_iter()
            .map(|v| {
                v.into_iter()
                    .map(|x| BigRational::from_integer(BigInt::from(x)))
                    .collect()
            })
            .collect();
        Cocycle::new(rank, values)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_edges(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, edge: usize) -> &[BigRational] {
        &self.values[edge]
    }

    pub fn values(&self) -> &[Vec<BigRational>] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().flatten().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.values.iter().flatten().all(|x| x.denom().is_one())
    }

    /// The edge weight as a lattice vector; None if any coordinate is not an
    /// integer.
    pub fn integer_value(&self, edge: usize) -> Option<ExponentVec> {
        let mut out = Vec::with_capacity(self.rank);
        for x in &self.values[edge] {
            if !x.denom().is_one() {
                return None;
            }
            out.push(i64::try_from(x.numer()).ok()?);
        }
        Some(ExponentVec::new(out))
    }

    pub fn scale(&self, by: &BigRational) -> Cocycle {
        Cocycle {
            rank: self.rank,
            values: self
                .values
                .iter()
                .map(|v| v.iter().map(|x| x * by).collect())
                .collect(),
        }
    }

    /// Least common multiple of all coordinate denominators: the smallest
    /// q ≥ 1 with q·w integral.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        let mut lcm = BigInt::one();
        for x in self.values.iter().flatten() {
            lcm = lcm.lcm(x.denom());
        }
        lcm
    }
}

fn tuple_str(vals: &[BigRational]) -> String {
    let parts: Vec<String> = vals.iter().map(|x| x.to_string()).collect();
    if parts.len() == 1 {
        parts.into_iter().next().unwrap()
    } else {
        format!("({})", parts.join(", "))
    }
}

/// Checks the cocycle condition w(e₀₁) + w(e₁₂) = w(e₀₂) on every 2-cell
/// (with vertex order v₀v₁v₂: e₀₁ = d₂, e₁₂ = d₀, e₀₂ = d₁).
pub fn validate_cocycle(c: &DeltaComplex, w: &Cocycle) -> Result<()> {
    if w.num_edges() != c.num_cells(1) {
        return Err(Error::CocycleLength {
            values: w.num_edges(),
            edges: c.num_cells(1),
        });
    }
    for t in 0..c.num_cells(2) {
        let faces = c.faces(2, t);
        let (e12, e02, e01) = (faces[0], faces[1], faces[2]);
        let sum: Vec<BigRational> = w
            .value(e01)
            .iter()
            .zip(w.value(e12))
            .map(|(a, b)| a + b)
            .collect();
        if sum != w.value(e02) {
            return Err(Error::CocycleViolation {
                cell: t,
                e01: tuple_str(w.value(e01)),
                e12: tuple_str(w.value(e12)),
                e02: tuple_str(w.value(e02)),
            });
        }
    }
    Ok(())
}

/// The chain complex of the free abelian cover, with boundary matrices over
/// the Laurent ring in r variables.
#[derive(Clone, Debug)]
pub struct EquivariantComplex {
    ring_rank: usize,
    cell_counts: Vec<usize>,
    /// boundaries[k−1] = D_k : C_k → C_{k−1}, for k = 1..=dimension.
    boundaries: Vec<LaurentMatrix>,
}

impl EquivariantComplex {
    pub fn ring_rank(&self) -> usize {
        self.ring_rank
    }

    pub fn dimension(&self) -> usize {
        self.cell_counts.len() - 1
    }

    pub fn cell_counts(&self) -> &[usize] {
        &self.cell_counts
    }

    /// D_k for 1 ≤ k ≤ dimension; None outside that range (those boundaries
    /// are zero maps).
    pub fn boundary(&self, k: usize) -> Option<&LaurentMatrix> {
        if k == 0 {
            None
        } else {
            self.boundaries.get(k - 1)
        }
    }

    pub fn euler(&self) -> i64 {
        self.cell_counts
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}

/// Builds the equivariant chain complex of the cover determined by an
/// integral cocycle.
///
/// The lift convention places the lift of each cell so that its first vertex
/// sits at lattice position 0; the boundary of the lift is then
/// ∂̃σ = z^{w(e₀₁(σ))}·d₀σ + Σ_{i≥1} (−1)^i d_iσ, twisting only the face that
/// drops the first vertex. D_k·D_{k+1} = 0 over the Laurent ring is asserted
/// after construction.
pub fn build_equivariant(c: &DeltaComplex, w: &Cocycle) -> Result<EquivariantComplex> {
    c.validate()?;
    validate_cocycle(c, w)?;
    if !w.is_integral() {
        return Err(Error::IntegerCocycleRequired);
    }
    let r = w.rank();
    let dim = c.dimension();
    let mut boundaries = Vec::with_capacity(dim);
    for k in 1..=dim {
        let mut d = LaurentMatrix::new(c.num_cells(k - 1), c.num_cells(k), r);
        for cell in 0..c.num_cells(k) {
            let faces = c.faces(k, cell);
            let weight = w
                .integer_value(c.leading_edge(k, cell))
                .ok_or(Error::IntegerCocycleRequired)?;
            d.add_to(cell_row(faces[0]), cell, &LaurentPoly::monomial(weight));
            for (i, &f) in faces.iter().enumerate().skip(1) {
                let sign = if i % 2 == 0 { 1 } else { -1 };
                d.add_to(cell_row(f), cell, &LaurentPoly::int_constant(r, sign));
            }
        }
        boundaries.push(d);
    }
    for k in 1..dim {
        let prod = boundaries[k - 1].mul(&boundaries[k])?;
        if !prod.is_zero() {
            return Err(Error::EquivariantBoundary { degree: k });
        }
    }
    Ok(EquivariantComplex {
        ring_rank: r,
        cell_counts: c.cell_counts(),
        boundaries,
    })
}

// Row index of a face cell (identity; named for readability at call sites).
fn cell_row(face: usize) -> usize {
    face
}

/// Builds the m-sheeted cyclic cover classified by a rank-1 integral cocycle.
///
/// Cover cells are pairs (base cell, sheet); the cell (σ, j) is indexed as
/// σ·m + j. Faces stay on their sheet except d₀, which moves by the weight of
/// the leading edge — the same convention as the equivariant lift. The
/// returned cocycle gives every lifted edge its base weight, and cover cell
/// counts are exactly m × the base counts.
pub fn cyclic_cover(c: &DeltaComplex, w: &Cocycle, m: u64) -> Result<(DeltaComplex, Cocycle)> {
    if w.rank() != 1 {
        return Err(Error::RankOneRequired { rank: w.rank() });
    }
    c.validate()?;
    validate_cocycle(c, w)?;
    if !w.is_integral() {
        return Err(Error::IntegerCocycleRequired);
    }
    if m == 0 {
        return Err(Error::InvalidSheetCount { m });
    }
    let mi = m as i64;
    let sheet_shift = |base: usize, j: u64, t: i64| -> usize {
        let shifted = (j as i64 + t).rem_euclid(mi) as u64;
        base * m as usize + shifted as usize
    };
    let mut cells = Vec::with_capacity(c.dimension());
    for k in 1..=c.dimension() {
        let mut level = Vec::with_capacity(c.num_cells(k) * m as usize);
        for cell in 0..c.num_cells(k) {
            let faces = c.faces(k, cell);
            let t0 = i64::try_from(
                w.value(c.leading_edge(k, cell))[0].numer().clone(),
            )
            .expect("edge weight fits i64");
            for j in 0..m {
                let mut lifted = Vec::with_capacity(faces.len());
                lifted.push(sheet_shift(faces[0], j, t0));
                for &f in &faces[1..] {
                    lifted.push(sheet_shift(f, j, 0));
                }
                level.push(lifted);
            }
        }
        cells.push(level);
    }
    let cover = DeltaComplex::from_cells(c.num_vertices * m as usize, cells)?;
    let mut values = Vec::with_capacity(c.num_cells(1) * m as usize);
    for edge in 0..c.num_cells(1) {
        for _ in 0..m {
            values.push(w.value(edge).to_vec());
        }
    }
    let cover_cocycle = Cocycle::new(1, values)?;
    validate_cocycle(&cover, &cover_cocycle)?;
    Ok((cover, cover_cocycle))
}

/// Spanning-forest decomposition of a cocycle: per-vertex potentials over a
/// breadth-first forest and the fundamental-cycle values of the non-tree
/// edges. The fundamental cycles are a ℤ-basis of the cycle space of the
/// 1-skeleton, so these values determine the class of w on every cycle.
pub(crate) struct ForestData {
    /// θ(v) ∈ ℚʳ with θ(root) = 0 per component; w(e) = θ(head) − θ(tail)
    /// for tree edges.
    pub potentials: Vec<Vec<BigRational>>,
    /// Indices of the non-tree edges, in edge order.
    pub cycle_edges: Vec<usize>,
    /// Cycle value θ(tail) + w(e) − θ(head) per non-tree edge.
    pub cycle_values: Vec<Vec<BigRational>>,
}

pub(crate) fn forest_data(c: &DeltaComplex, w: &Cocycle) -> ForestData {
    let n = c.num_cells(0);
    let r = w.rank();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in 0..c.num_cells(1) {
        incident[c.edge_tail(e)].push(e);
        if c.edge_head(e) != c.edge_tail(e) {
            incident[c.edge_head(e)].push(e);
        }
    }
    let mut potentials = vec![vec![BigRational::zero(); r]; n];
    let mut visited = vec![false; n];
    let mut is_tree_edge = vec![false; c.num_cells(1)];
    let mut queue = std::collections::VecDeque::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            for &e in &incident[v] {
                let (tail, head) = (c.edge_tail(e), c.edge_head(e));
                let other = if v == tail { head } else { tail };
                if visited[other] {
                    continue;
                }
                visited[other] = true;
                is_tree_edge[e] = true;
                let sign_forward = other == head;
                potentials[other] = potentials[v]
                    .iter()
                    .zip(w.value(e))
                    .map(|(p, x)| if sign_forward { p + x } else { p - x })
                    .collect();
                queue.push_back(other);
            }
        }
    }
    let mut cycle_edges = Vec::new();
    let mut cycle_values = Vec::new();
    for e in 0..c.num_cells(1) {
        if is_tree_edge[e] {
            continue;
        }
        let (tail, head) = (c.edge_tail(e), c.edge_head(e));
        let value: Vec<BigRational> = potentials[tail]
            .iter()
            .zip(w.value(e))
            .zip(&potentials[head])
            .map(|((t, x), h)| t + x - h)
            .collect();
        cycle_edges.push(e);
        cycle_values.push(value);
    }
    ForestData {
        potentials,
        cycle_edges,
        cycle_values,
    }
}

/// Rank of the subgroup of ℚʳ generated by the values of w on a cycle basis
/// of the 1-skeleton.
pub fn cocycle_rank(c: &DeltaComplex, w: &Cocycle) -> Result<usize> {
    validate_cocycle(c, w)?;
    let forest = forest_data(c, w);
    Ok(linalg::rank_rational(&forest.cycle_values))
}
