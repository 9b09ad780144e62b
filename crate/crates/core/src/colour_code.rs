//! Triangular 2D colour codes on the 6.6.6 and 4.8.8 tilings.
//!
//! Only the code-capacity data is produced: one check row per plaquette
//! (X and Z checks share supports) and a logical representative.
//!
//! # Coordinates
//!
//! **6.6.6.** Points `(r, c)` with `0 ≤ c ≤ r ≤ 3(d-1)/2` form a triangular
//! patch of the triangular lattice, with neighbours at offsets `(±1, 0)`,
//! `(0, ±1)`, `±(1, 1)`. Points with `(r + c) mod 3 == 1` are plaquette
//! centres; all other points are qubits. A plaquette acts on the qubits among
//! its six neighbours and is coloured `r mod 3`. Qubits and plaquettes are
//! numbered row-major in `(r, c)`.
//!
//! **4.8.8.** Built from the dual tetrakis-square lattice in doubled
//! coordinates: a vertex with odd `(x, y)` is a square centre, one with even
//! `(x, y)` an octagon centre coloured by `(x + y) / 2 mod 2`. With
//! `u = (x + y) / 2`, `w = (x - y) / 2` and `k = (d - 1) / 2`, the plaquettes
//! of the distance-`d` patch are
//!
//! * row `u = 0`: even `w` in `0..=2(k-1)`;
//! * row `u = 1`: `w` in `-1..=2(k-1)`;
//! * row `u = j` for `2 ≤ j ≤ k`: `w` in `2j - 1 - 2⌈j/2⌉ ..= 2(k-1) - 2⌈j/2⌉ + 2`.
//!
//! Qubits are the triangles of that region, plus one qubit per boundary edge
//! and one per corner where two boundaries of different colour meet. They
//! are numbered row-major by their centroid.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2::{BitVector, SparseBinaryMatrix};

pub const MAX_DISTANCE: usize = 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tiling {
    Hex666,
    SquareOct488,
}

impl Tiling {
    /// Qubit count of the distance-`d` triangle.
    pub fn qubit_count(self, d: usize) -> usize {
        match self {
            Tiling::Hex666 => (3 * d * d + 1) / 4,
            Tiling::SquareOct488 => (d * d + 2 * d - 1) / 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Tiling::Hex666 => "hex666",
            Tiling::SquareOct488 => "sqoct488",
        }
    }
}

impl fmt::Display for Tiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Tiling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hex666" => Ok(Tiling::Hex666),
            "sqoct488" => Ok(Tiling::SquareOct488),
            _ => Err(Error::value(format!(
                "unknown tiling `{s}` (expected hex666 or sqoct488)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Colour {
    Red,
    Green,
    Blue,
}

impl Colour {
    fn from_index(i: usize) -> Self {
        [Colour::Red, Colour::Green, Colour::Blue][i % 3]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plaquette {
    pub colour: Colour,
    /// Sorted qubit indices.
    pub qubits: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColourCodeLattice {
    pub tiling: Tiling,
    pub distance: usize,
    pub qubit_count: usize,
    pub plaquettes: Vec<Plaquette>,
    /// Plaquettes × qubits.
    pub check_matrix: SparseBinaryMatrix,
    pub logical: BitVector,
}

pub fn build_colour_code(tiling: Tiling, distance: usize) -> Result<ColourCodeLattice> {
    if distance < 3 || distance % 2 != 1 || distance > MAX_DISTANCE {
        return Err(Error::value(format!(
            "distance must be odd and between 3 and {MAX_DISTANCE}, got {distance}"
        )));
    }
    let (qubit_count, plaquettes) = match tiling {
        Tiling::Hex666 => hex_plaquettes(distance),
        Tiling::SquareOct488 => square_octagon_plaquettes(distance),
    };
    debug_assert_eq!(qubit_count, tiling.qubit_count(distance));
    let check_matrix = SparseBinaryMatrix::from_sorted_rows(
        plaquettes.len(),
        qubit_count,
        plaquettes.iter().map(|p| p.qubits.clone()).collect(),
    );
    Ok(ColourCodeLattice {
        tiling,
        distance,
        qubit_count,
        plaquettes,
        check_matrix,
        logical: BitVector::ones(qubit_count),
    })
}

/// The all-ones vector. Every plaquette has even weight, so it commutes with
/// all checks.
pub fn logical_representative(lattice: &ColourCodeLattice) -> BitVector {
    BitVector::ones(lattice.qubit_count)
}

fn hex_plaquettes(d: usize) -> (usize, Vec<Plaquette>) {
    let size = 3 * (d - 1) / 2;
    let is_face = |r: usize, c: usize| (r + c) % 3 == 1;
    let mut qubit_index = HashMap::new();
    let mut faces = Vec::new();
    for r in 0..=size {
        for c in 0..=r {
            if is_face(r, c) {
                faces.push((r, c));
            } else {
                let next = qubit_index.len();
                qubit_index.insert((r, c), next);
            }
        }
    }
    const OFFSETS: [(isize, isize); 6] = [(-1, -1), (-1, 0), (0, -1), (0, 1), (1, 0), (1, 1)];
    let plaquettes = faces
        .into_iter()
        .map(|(r, c)| {
            let mut qubits: Vec<usize> = OFFSETS
                .iter()
                .filter_map(|&(dr, dc)| {
                    let nr = r.checked_add_signed(dr)?;
                    let nc = c.checked_add_signed(dc)?;
                    qubit_index.get(&(nr, nc)).copied()
                })
                .collect();
            qubits.sort_unstable();
            Plaquette {
                colour: Colour::from_index(r),
                qubits,
            }
        })
        .collect();
    (qubit_index.len(), plaquettes)
}

type Vertex = (i64, i64);

/// 0 for squares, 1 or 2 for the two octagon classes.
fn dual_colour((x, y): Vertex) -> usize {
    if x.rem_euclid(2) == 1 {
        0
    } else {
        1 + ((x + y) / 2).rem_euclid(2) as usize
    }
}

fn square_octagon_region(d: usize) -> Vec<Vertex> {
    let k = ((d - 1) / 2) as i64;
    let mut uw: Vec<(i64, i64)> = (0..=2 * (k - 1)).step_by(2).map(|w| (0, w)).collect();
    uw.extend((-1..=2 * (k - 1)).map(|w| (1, w)));
    for j in 2..=k {
        let half_up = (j + 1) / 2;
        uw.extend((2 * j - 1 - 2 * half_up..=2 * (k - 1) - 2 * half_up + 2).map(|w| (j, w)));
    }
    let mut region: Vec<Vertex> = uw.into_iter().map(|(u, w)| (u + w, u - w)).collect();
    region.sort_by_key(|&(x, y)| (-y, x));
    region
}

fn square_octagon_plaquettes(d: usize) -> (usize, Vec<Plaquette>) {
    let region = square_octagon_region(d);
    let plaquette_of: HashMap<Vertex, usize> =
        region.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    // Each qubit is recorded as its incident plaquettes plus a position key.
    let mut qubits: Vec<((i64, i64), Vec<usize>)> = Vec::new();
    let mut edge_use: HashMap<(usize, usize), usize> = HashMap::new();
    for &(cx, cy) in region.iter().filter(|v| dual_colour(**v) == 0) {
        let c = plaquette_of[&(cx, cy)];
        let corners = [
            (cx - 1, cy - 1),
            (cx + 1, cy - 1),
            (cx + 1, cy + 1),
            (cx - 1, cy + 1),
        ];
        for i in 0..4 {
            let (va, vb) = (corners[i], corners[(i + 1) % 4]);
            let (Some(&a), Some(&b)) = (plaquette_of.get(&va), plaquette_of.get(&vb)) else {
                continue;
            };
            let key = (2 * (cx + va.0 + vb.0), 2 * (cy + va.1 + vb.1));
            qubits.push((key, vec![c, a, b]));
            for e in [(c, a), (c, b), (a, b)] {
                *edge_use.entry((e.0.min(e.1), e.0.max(e.1))).or_default() += 1;
            }
        }
    }

    // Boundary edges lie in a single triangle; each carries one qubit shared
    // with the boundary of the third colour.
    let mut boundary_colours: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut boundary: Vec<(usize, usize)> = edge_use
        .iter()
        .filter(|&(_, &n)| n == 1)
        .map(|(&e, _)| e)
        .collect();
    boundary.sort_unstable();
    for (a, b) in boundary {
        let (va, vb) = (region[a], region[b]);
        let key = (3 * (va.0 + vb.0), 3 * (va.1 + vb.1));
        qubits.push((key, vec![a, b]));
        let arc = 3 - dual_colour(va) - dual_colour(vb);
        boundary_colours.entry(a).or_default().push(arc);
        boundary_colours.entry(b).or_default().push(arc);
    }

    // Corners: a vertex whose two boundary edges belong to different arcs.
    // The single pinch vertex (four boundary edges) is not a corner.
    let mut corners = 0;
    for (&v, arcs) in &boundary_colours {
        if arcs.len() == 2 && arcs[0] != arcs[1] {
            let (x, y) = region[v];
            qubits.push(((6 * x, 6 * y), vec![v]));
            corners += 1;
        }
    }
    debug_assert_eq!(corners, 3);

    qubits.sort_by_key(|&((x, y), _)| (-y, x));
    let mut supports = vec![Vec::new(); region.len()];
    for (q, (_, plaqs)) in qubits.iter().enumerate() {
        for &p in plaqs {
            supports[p].push(q);
        }
    }
    let plaquettes = supports
        .into_iter()
        .zip(&region)
        .map(|(qubits, &v)| Plaquette {
            colour: Colour::from_index(dual_colour(v)),
            qubits,
        })
        .collect();
    (qubits.len(), plaquettes)
}
