//! Dual cell subdivisions of closed diagrams and an event-driven traffic
//! flow simulator with crash detection and corner-word reading.
//!
//! The simulator is instrumentation for the car-crash argument, not part of
//! any correctness claim: it ships only the bigon flow, and detects crashes
//! tick-wise with refinement-stability testing rather than exact real-time
//! algebra. The one-clump flow lives outside this crate's sources and the
//! [`Schedule`] type is the extension point for it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::diagram::{Attachment, Dart, Diagram, DiagramError, FaceItem};
use crate::group::GroupElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CrashError {
    #[error("diagram error: {0}")]
    Diagram(#[from] DiagramError),
    #[error("dual maps need a closed connected diagram")]
    NotClosedConnected,
    #[error("the bigon flow needs every cell to be a bigon; disc {0} has {1} legs")]
    NotAllBigons(usize, usize),
    #[error("schedule covers {got} cells, the map has {want}")]
    ScheduleMismatch { got: usize, want: usize },
}

/// The cell subdivision of the sphere dual to a closed diagram: a vertex in
/// each region, an edge across each t-arc, a cell per disc.
#[derive(Debug, Clone)]
pub struct DualMap {
    pub vertex_count: usize,
    /// Per arc, the two adjacent vertices (regions).
    pub edges: Vec<(usize, usize)>,
    pub cells: Vec<DualCell>,
    /// The corner words readable at each vertex.
    corners: Vec<Vec<CornerLetter>>,
}

#[derive(Debug, Clone)]
pub struct DualCell {
    pub disc: usize,
    /// The vertices visited by the cell boundary, in anticlockwise order;
    /// edge `i` of the boundary joins `vertices[i-1]` to `vertices[i]`.
    pub vertices: Vec<usize>,
    /// The arcs crossed, aligned with `vertices`.
    pub edges: Vec<usize>,
}

impl DualCell {
    pub fn boundary_len(&self) -> usize {
        self.edges.len()
    }
}

/// A letter read at a region corner: a coefficient of the main word or a
/// two-leg label, tagged accordingly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CornerLetter {
    pub from_twoleg: bool,
    pub label: GroupElement,
}

impl DualMap {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.cells.len() as i64
    }

    /// The unreduced word read around a vertex, corner by corner in rotation
    /// order; letters from main discs alternate with two-leg material.
    pub fn corner_word(&self, vertex: usize) -> &[CornerLetter] {
        &self.corners[vertex]
    }
}

/// Build the dual map of a closed connected valid diagram.
pub fn dual_map(d: &Diagram) -> Result<DualMap, CrashError> {
    if d.boundary.is_some() || d.discs.is_empty() {
        return Err(CrashError::NotClosedConnected);
    }
    let components: BTreeSet<usize> = d.components().into_iter().collect();
    if components.len() != 1 {
        return Err(CrashError::NotClosedConnected);
    }
    let (faces, _) = d.faces_and_outer()?;
    let att = d
        .attachment_table()
        .map_err(|f| DiagramError::Invalid(format!("{:?}", f)))?;
    let mut edges = Vec::with_capacity(d.arcs.len());
    for (a, _) in d.arcs.iter().enumerate() {
        let f0 = faces.face_of[&Dart::Arc { arc: a, to_end: 0 }];
        let f1 = faces.face_of[&Dart::Arc { arc: a, to_end: 1 }];
        edges.push((f0, f1));
    }
    let mut cells = Vec::with_capacity(d.discs.len());
    for (di, disc) in d.discs.iter().enumerate() {
        let n = disc.num_legs();
        let mut vertices = Vec::with_capacity(n);
        let mut cell_edges = Vec::with_capacity(n);
        for &attachment in att[di].iter().take(n) {
            let Attachment::Arc(a, e) = attachment else {
                return Err(CrashError::NotClosedConnected);
            };
            cell_edges.push(a);
            // The region holding the corner after leg p: the face of the
            // dart leaving (di, p).
            let leaving = Dart::Arc { arc: a, to_end: 1 - e };
            vertices.push(faces.face_of[&leaving]);
        }
        cells.push(DualCell { disc: di, vertices, edges: cell_edges });
    }
    let corners = faces
        .faces
        .iter()
        .map(|f| {
            f.items
                .iter()
                .filter_map(|item| match item {
                    FaceItem::Corner { disc, seg } => Some(CornerLetter {
                        from_twoleg: !d.discs[*disc].kind.is_main(),
                        label: d.discs[*disc].segs[*seg].clone(),
                    }),
                    FaceItem::Stretch { .. } => None,
                })
                .collect()
        })
        .collect();
    Ok(DualMap { vertex_count: faces.faces.len(), edges, cells, corners })
}

/// A traffic flow: per cell, the times its car sits at each boundary vertex.
/// Cars tour their boundary once per unit period; a missing visit list means
/// the car is parked away from every vertex.
#[derive(Debug, Clone)]
pub struct Schedule {
    pub cars: Vec<CarPlan>,
    pub without_stops: bool,
}

#[derive(Debug, Clone)]
pub struct CarPlan {
    pub cell: usize,
    /// (boundary vertex position, time in [0,1)) visits.
    pub visits: Vec<(usize, f64)>,
}

/// The flow for all-bigon maps: every car leaves one pole at time 0 and
/// reaches the other at time 1/2, at constant speed, forever.
pub fn bigon_schedule(map: &DualMap) -> Result<Schedule, CrashError> {
    for cell in &map.cells {
        if cell.boundary_len() != 2 {
            return Err(CrashError::NotAllBigons(cell.disc, cell.boundary_len()));
        }
    }
    // All-bigon sphere maps have exactly two vertices; pick the least as the
    // common starting pole.
    let pole = map
        .cells
        .iter()
        .flat_map(|c| c.vertices.iter().copied())
        .min()
        .unwrap_or(0);
    let cars = map
        .cells
        .iter()
        .enumerate()
        .map(|(i, cell)| {
            let visits = cell
                .vertices
                .iter()
                .enumerate()
                .map(|(pos, &v)| (pos, if v == pole { 0.0 } else { 0.5 }))
                .collect();
            CarPlan { cell: i, visits }
        })
        .collect();
    Ok(Schedule { cars, without_stops: true })
}

/// A complete crash: an instant when every cell incident to a vertex has its
/// car at that vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct CrashEvent {
    pub vertex: usize,
    pub time: f64,
    pub cells: Vec<usize>,
}

/// Detect complete crashes by a discrete sweep at the given resolution: a
/// car is "at" a vertex during the tick containing its visit time.
pub fn simulate(
    map: &DualMap,
    schedule: &Schedule,
    resolution: usize,
) -> Result<Vec<CrashEvent>, CrashError> {
    if schedule.cars.len() != map.cells.len() {
        return Err(CrashError::ScheduleMismatch {
            got: schedule.cars.len(),
            want: map.cells.len(),
        });
    }
    let resolution = resolution.max(2);
    // vertex -> cell -> tick set
    let mut at: BTreeMap<usize, BTreeMap<usize, BTreeSet<usize>>> = BTreeMap::new();
    for car in &schedule.cars {
        let cell = &map.cells[car.cell];
        for &(pos, time) in &car.visits {
            let vertex = cell.vertices[pos];
            let tick = ((time.rem_euclid(1.0)) * resolution as f64).round() as usize
                % resolution;
            at.entry(vertex).or_default().entry(car.cell).or_default().insert(tick);
        }
    }
    // Incidence with multiplicity collapsed: a vertex's incident cells.
    let mut incident: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (i, cell) in map.cells.iter().enumerate() {
        for &v in &cell.vertices {
            incident.entry(v).or_default().insert(i);
        }
    }
    let mut events = Vec::new();
    for (&vertex, cells) in &incident {
        let Some(times) = at.get(&vertex) else { continue };
        if cells.iter().any(|c| !times.contains_key(c)) {
            continue;
        }
        for tick in 0..resolution {
            let all_here = cells.iter().all(|c| times[c].contains(&tick));
            if all_here {
                events.push(CrashEvent {
                    vertex,
                    time: tick as f64 / resolution as f64,
                    cells: cells.iter().copied().collect(),
                });
            }
        }
    }
    Ok(events)
}

impl CrashEvent {
    /// Trace line: `crash t=0.500 v=R3 cells={c1,c2} word=a b a'`.
    pub fn trace_line(&self, map: &DualMap, spec: &crate::group::GroupSpec) -> String {
        let cells: Vec<String> = self.cells.iter().map(|c| format!("c{}", c + 1)).collect();
        let word: Vec<String> = map
            .corner_word(self.vertex)
            .iter()
            .map(|l| {
                if l.label.is_identity() {
                    "1".to_string()
                } else {
                    format!("{}", spec.display_element(&l.label))
                }
            })
            .collect();
        format!(
            "crash t={:.3} v=R{} cells={{{}}} word={}",
            self.time,
            self.vertex + 1,
            cells.join(","),
            word.join(" ")
        )
    }
}

impl fmt::Display for CrashEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.cells.iter().map(|c| format!("c{}", c + 1)).collect();
        write!(f, "crash t={:.3} v=R{} cells={{{}}}", self.time, self.vertex + 1, cells.join(","))
    }
}
