//! MovingAI benchmark map and scenario parsing.
//!
//! A `.map` file looks like:
//!
//! ```text
//! type octile
//! height 2
//! width 2
//! map
//! ..
//! .@
//! ```
//!
//! `.` and `G` are passable, `@`, `O`, `T`, `W` are blocked. A `.scen` file
//! starts with `version 1` and lists one task per line:
//! `bucket  map  map-width  map-height  start-x  start-y  goal-x  goal-y  optimal-length`.

use std::fmt::Write as _;

use thiserror::Error;

/// Index of a passable cell, dense in `0..num_vertices` (row-major rank
/// among passable cells).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Error)]
pub enum MapError {
    #[error("missing or malformed `{0}` header line")]
    BadHeader(&'static str),
    #[error("map dimensions must be at least 1x1")]
    EmptyDimensions,
    #[error("row {row}: expected {expected} cells, found {found}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("grid truncated: expected {expected} rows, found {found}")]
    TruncatedGrid { expected: usize, found: usize },
    #[error("row {row}, column {col}: unknown terrain character {ch:?}")]
    UnknownTerrain { row: usize, col: usize, ch: char },
}

#[derive(Debug, Error)]
pub enum ScenError {
    #[error("missing version header")]
    MissingVersion,
    #[error("unsupported scenario version `{0}`")]
    UnsupportedVersion(String),
    #[error("line {line}: expected 9 fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: invalid {field}: `{value}`")]
    BadField {
        line: usize,
        field: &'static str,
        value: String,
    },
    #[error("line {line}: coordinate ({x}, {y}) out of bounds for {width}x{height} map")]
    OutOfBounds {
        line: usize,
        x: u32,
        y: u32,
        width: u32,
        height: u32,
    },
    #[error("line {line}: cell ({x}, {y}) is blocked")]
    BlockedCell { line: usize, x: u32, y: u32 },
}

/// A parsed grid: dimensions plus a row-major passability mask, with the
/// dense passable-cell indexing used by the search graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridMap {
    width: u32,
    height: u32,
    passable: Vec<bool>,
    // passable cell (row-major) -> vertex id, and the inverse
    vertex_of_cell: Vec<Option<VertexId>>,
    cell_of_vertex: Vec<u32>,
}

impl GridMap {
    pub fn from_passable(width: u32, height: u32, passable: Vec<bool>) -> Self {
        assert!(
            width >= 1 && height >= 1,
            "map dimensions must be at least 1x1"
        );
        assert_eq!(passable.len(), (width as usize) * (height as usize));
        let mut vertex_of_cell = vec![None; passable.len()];
        let mut cell_of_vertex = Vec::new();
        for (cell, &open) in passable.iter().enumerate() {
            if open {
                vertex_of_cell[cell] = Some(VertexId(cell_of_vertex.len() as u32));
                cell_of_vertex.push(cell as u32);
            }
        }
        Self {
            width,
            height,
            passable,
            vertex_of_cell,
            cell_of_vertex,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn is_passable(&self, x: u32, y: u32) -> bool {
        x < self.width && y < self.height && self.passable[(y * self.width + x) as usize]
    }

    /// Number of passable cells.
    pub fn num_vertices(&self) -> usize {
        self.cell_of_vertex.len()
    }

    /// Vertex id of the passable cell at `(x, y)`, if any.
    pub fn vertex_at(&self, x: u32, y: u32) -> Option<VertexId> {
        if x >= self.width || y >= self.height {
            return None;
        }
        self.vertex_of_cell[(y * self.width + x) as usize]
    }

    /// `(x, y)` coordinates of a vertex.
    pub fn coords_of(&self, v: VertexId) -> (u32, u32) {
        let cell = self.cell_of_vertex[v.index()];
        (cell % self.width, cell / self.width)
    }

    /// Renders back to `.map` text (`.` for passable, `@` for blocked).
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "type octile");
        let _ = writeln!(out, "height {}", self.height);
        let _ = writeln!(out, "width {}", self.width);
        let _ = writeln!(out, "map");
        for y in 0..self.height {
            for x in 0..self.width {
                out.push(if self.passable[(y * self.width + x) as usize] {
                    '.'
                } else {
                    '@'
                });
            }
            out.push('\n');
        }
        out
    }
}

/// One agent's start/goal assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgentTask {
    pub agent_id: usize,
    pub start: VertexId,
    pub goal: VertexId,
}

/// An ordered task list; the first `n` tasks form the n-agent instance.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub map_name: String,
    pub tasks: Vec<AgentTask>,
}

impl Scenario {
    /// The `n`-agent instance, by benchmark convention the first `n` tasks.
    pub fn first_tasks(&self, n: usize) -> Option<&[AgentTask]> {
        self.tasks.get(..n)
    }
}

fn header_value<'a>(line: Option<&'a str>, key: &'static str) -> Result<&'a str, MapError> {
    let line = line.ok_or(MapError::BadHeader(key))?.trim();
    let mut parts = line.split_whitespace();
    match (parts.next(), parts.next(), parts.next()) {
        (Some(k), Some(v), None) if k == key => Ok(v),
        _ => Err(MapError::BadHeader(key)),
    }
}

/// Parses MovingAI `.map` text.
pub fn parse_map(text: &str) -> Result<GridMap, MapError> {
    let mut lines = text.lines();
    header_value(lines.next(), "type")?;
    let height: u32 = header_value(lines.next(), "height")?
        .parse()
        .map_err(|_| MapError::BadHeader("height"))?;
    let width: u32 = header_value(lines.next(), "width")?
        .parse()
        .map_err(|_| MapError::BadHeader("width"))?;
    match lines.next().map(str::trim) {
        Some("map") => {}
        _ => return Err(MapError::BadHeader("map")),
    }
    if width == 0 || height == 0 {
        return Err(MapError::EmptyDimensions);
    }

    let mut passable = Vec::with_capacity((width as usize) * (height as usize));
    let mut rows = 0usize;
    for line in lines {
        let row = line.trim_end();
        if row.is_empty() {
            continue;
        }
        if rows == height as usize {
            return Err(MapError::TruncatedGrid {
                expected: height as usize,
                found: rows + 1,
            });
        }
        if row.chars().count() != width as usize {
            return Err(MapError::RowLength {
                row: rows,
                expected: width as usize,
                found: row.chars().count(),
            });
        }
        for (col, ch) in row.chars().enumerate() {
            let open = match ch {
                '.' | 'G' => true,
                '@' | 'O' | 'T' | 'W' => false,
                other => {
                    return Err(MapError::UnknownTerrain {
                        row: rows,
                        col,
                        ch: other,
                    })
                }
            };
            passable.push(open);
        }
        rows += 1;
    }
    if rows != height as usize {
        return Err(MapError::TruncatedGrid {
            expected: height as usize,
            found: rows,
        });
    }
    Ok(GridMap::from_passable(width, height, passable))
}

/// Parses MovingAI `.scen` text against an already-parsed map.
pub fn parse_scen(text: &str, map: &GridMap) -> Result<Scenario, ScenError> {
    let mut lines = text.lines().enumerate();

    let version_line = loop {
        match lines.next() {
            Some((_, line)) if line.trim().is_empty() => continue,
            Some((_, line)) => break line.trim().to_string(),
            None => return Err(ScenError::MissingVersion),
        }
    };
    match version_line.strip_prefix("version") {
        Some(v) if v.trim() == "1" => {}
        Some(v) => return Err(ScenError::UnsupportedVersion(v.trim().to_string())),
        None => return Err(ScenError::MissingVersion),
    }

    let mut map_name = String::new();
    let mut tasks = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 9 {
            return Err(ScenError::FieldCount {
                line: line_no,
                found: fields.len(),
            });
        }
        let parse_u32 = |i: usize, field: &'static str| -> Result<u32, ScenError> {
            fields[i].parse().map_err(|_| ScenError::BadField {
                line: line_no,
                field,
                value: fields[i].to_string(),
            })
        };
        parse_u32(0, "bucket")?;
        if map_name.is_empty() {
            map_name = fields[1].to_string();
        }
        parse_u32(2, "map width")?;
        parse_u32(3, "map height")?;
        let sx = parse_u32(4, "start x")?;
        let sy = parse_u32(5, "start y")?;
        let gx = parse_u32(6, "goal x")?;
        let gy = parse_u32(7, "goal y")?;
        fields[8].parse::<f64>().map_err(|_| ScenError::BadField {
            line: line_no,
            field: "optimal length",
            value: fields[8].to_string(),
        })?;

        let vertex = |x: u32, y: u32| -> Result<VertexId, ScenError> {
            if x >= map.width() || y >= map.height() {
                return Err(ScenError::OutOfBounds {
                    line: line_no,
                    x,
                    y,
                    width: map.width(),
                    height: map.height(),
                });
            }
            map.vertex_at(x, y).ok_or(ScenError::BlockedCell {
                line: line_no,
                x,
                y,
            })
        };
        tasks.push(AgentTask {
            agent_id: tasks.len(),
            start: vertex(sx, sy)?,
            goal: vertex(gx, gy)?,
        });
    }
    Ok(Scenario { map_name, tasks })
}

/// Generates a scenario of `count` tasks by seeded sampling of passable
/// cells: starts are pairwise distinct, goals are pairwise distinct, and no
/// task has start equal to its own goal. Deterministic in `seed`.
pub fn random_scenario(map: &GridMap, count: usize, seed: u64) -> Option<Scenario> {
    let n = map.num_vertices();
    if n < 2 || count == 0 || count > n {
        return None;
    }
    let mut stream = crate::cost_model::SplitMix64::new(seed);
    let mut draw = |used: &[bool]| -> VertexId {
        loop {
            let v = (stream.next_u64() % n as u64) as usize;
            if !used[v] {
                return VertexId(v as u32);
            }
        }
    };
    let mut starts_used = vec![false; n];
    let mut goals_used = vec![false; n];
    let mut tasks = Vec::with_capacity(count);
    for agent_id in 0..count {
        let start = draw(&starts_used);
        starts_used[start.index()] = true;
        let goal = loop {
            let g = draw(&goals_used);
            if g != start {
                break g;
            }
        };
        goals_used[goal.index()] = true;
        tasks.push(AgentTask {
            agent_id,
            start,
            goal,
        });
    }
    Some(Scenario {
        map_name: String::new(),
        tasks,
    })
}
