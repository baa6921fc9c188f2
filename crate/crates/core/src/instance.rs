//! Instance documents, presets and the random generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::disk_graph::GeodesicDisk;
use crate::error::{Error, Result};
use crate::geometry::{point_in_free_space, rect_ring, Point, PolygonWithHoles};

/// A free space, its disks and free-form metadata.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub free_space: PolygonWithHoles,
    pub disks: Vec<GeodesicDisk>,
    pub metadata: Map<String, Value>,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn number(v: &Value, path: &str) -> Result<f64> {
    let x = v.as_f64().ok_or_else(|| schema(path, "expected a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(schema(path, "expected a finite number"))
    }
}

fn point(v: &Value, path: &str) -> Result<Point> {
    match v.as_array() {
        Some(xy) if xy.len() == 2 => Ok(Point::new(
            number(&xy[0], &format!("{path}[0]"))?,
            number(&xy[1], &format!("{path}[1]"))?,
        )),
        _ => Err(schema(path, "expected a point [x, y]")),
    }
}

fn ring(v: &Value, path: &str) -> Result<Vec<Point>> {
    let items = v.as_array().ok_or_else(|| schema(path, "expected a list of points"))?;
    items
        .iter()
        .enumerate()
        .map(|(k, p)| point(p, &format!("{path}[{k}]")))
        .collect()
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| schema(path, format!("missing field `{key}`")))
}

fn ring_value(ring: &[Point]) -> Value {
    Value::Array(ring.iter().map(|p| json!([p.x, p.y])).collect())
}

impl Instance {
    /// Validates that every disk center lies in the free space, radii are
    /// finite and nonnegative, and ids are unique.
    pub fn new(free_space: PolygonWithHoles, disks: Vec<GeodesicDisk>, metadata: Map<String, Value>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for d in &disks {
            if !seen.insert(d.id) {
                return Err(Error::DuplicateDisk(d.id));
            }
            if !(d.radius.is_finite() && d.radius >= 0.0) {
                return Err(Error::InvalidRadius(d.id));
            }
            if !d.center.is_finite() || !point_in_free_space(&free_space, d.center) {
                return Err(Error::DiskOutsideFreeSpace {
                    id: d.id,
                    center: d.center,
                });
            }
        }
        Ok(Instance {
            free_space,
            disks,
            metadata,
        })
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn name(&self) -> Option<&str> {
        self.metadata.get("name").and_then(Value::as_str)
    }

    pub fn hole_count(&self) -> usize {
        self.free_space.holes().len()
    }

    pub fn to_value(&self) -> Value {
        let disks: Vec<Value> = self
            .disks
            .iter()
            .map(|d| json!({"id": d.id, "center": [d.center.x, d.center.y], "radius": d.radius}))
            .collect();
        let holes: Vec<Value> = self.free_space.holes().iter().map(|h| ring_value(h)).collect();
        json!({
            "free_space": {"outer": ring_value(self.free_space.outer()), "holes": holes},
            "disks": disks,
            "metadata": Value::Object(self.metadata.clone()),
        })
    }

    pub fn from_value(v: &Value) -> Result<Self> {
        let root = v.as_object().ok_or_else(|| schema("$", "expected an object"))?;
        let fs = field(root, "free_space", "$")?
            .as_object()
            .ok_or_else(|| schema("$.free_space", "expected an object"))?;
        let outer = ring(field(fs, "outer", "$.free_space")?, "$.free_space.outer")?;
        let holes = match fs.get("holes") {
            None => Vec::new(),
            Some(h) => h
                .as_array()
                .ok_or_else(|| schema("$.free_space.holes", "expected a list of rings"))?
                .iter()
                .enumerate()
                .map(|(k, r)| ring(r, &format!("$.free_space.holes[{k}]")))
                .collect::<Result<_>>()?,
        };
        let free_space = PolygonWithHoles::new(outer, holes)?;
        let items = field(root, "disks", "$")?
            .as_array()
            .ok_or_else(|| schema("$.disks", "expected a list"))?;
        let mut disks = Vec::with_capacity(items.len());
        for (k, item) in items.iter().enumerate() {
            let path = format!("$.disks[{k}]");
            let obj = item.as_object().ok_or_else(|| schema(&path, "expected an object"))?;
            let id = field(obj, "id", &path)?
                .as_u64()
                .ok_or_else(|| schema(format!("{path}.id"), "expected a nonnegative integer"))?;
            let center = point(field(obj, "center", &path)?, &format!("{path}.center"))?;
            let radius = number(field(obj, "radius", &path)?, &format!("{path}.radius"))?;
            disks.push(GeodesicDisk::new(id as usize, center, radius));
        }
        let metadata = match root.get("metadata") {
            None => Map::new(),
            Some(Value::Object(m)) => m.clone(),
            Some(_) => return Err(schema("$.metadata", "expected an object")),
        };
        Instance::new(free_space, disks, metadata)
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema("$", e.to_string()))?;
    Instance::from_value(&v)
}

/// Canonical text: pretty JSON with sorted keys and shortest round-trip floats.
pub fn write_instance(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&inst.to_value()).expect("instance values serialize");
    s.push('\n');
    s
}

/// Parameters of the random generator.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorParams {
    pub seed: u64,
    pub n_disks: usize,
    pub n_holes: usize,
    /// `(x0, y0, x1, y1)`.
    pub bbox: (f64, f64, f64, f64),
    pub radius: (f64, f64),
    /// Side lengths of the square holes.
    pub hole_side: (f64, f64),
}

impl GeneratorParams {
    /// Square of constant disk density: side `10 sqrt(n)`, radii in `[3, 6]`.
    pub fn family(n_disks: usize, n_holes: usize, seed: u64) -> Self {
        let side = 10.0 * (n_disks.max(1) as f64).sqrt();
        let hole = side / (2.0 * (n_holes as f64 + 1.0).sqrt());
        GeneratorParams {
            seed,
            n_disks,
            n_holes,
            bbox: (0.0, 0.0, side, side),
            radius: (3.0, 6.0),
            hole_side: (0.3 * hole, 0.6 * hole),
        }
    }
}

const HOLE_ATTEMPTS: usize = 10_000;

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.gen_range(lo..hi)
    } else {
        lo
    }
}

/// Deterministic random instance: square holes by rejection, centers
/// uniform over the free space, radii uniform in the given range.
pub fn generate_instance(p: &GeneratorParams) -> Result<Instance> {
    let (x0, y0, x1, y1) = p.bbox;
    if !(x1 > x0 && y1 > y0) || !(p.radius.0 >= 0.0 && p.radius.1 >= p.radius.0) {
        return Err(Error::Generator("bounding box must be nonempty and radii ordered".into()));
    }
    if p.n_holes > 0 && !(p.hole_side.0 > 0.0 && p.hole_side.1 >= p.hole_side.0) {
        return Err(Error::Generator("hole sides must be positive and ordered".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let margin = 0.02 * (x1 - x0).min(y1 - y0);
    let mut holes: Vec<(f64, f64, f64)> = Vec::new();
    let mut attempts = 0;
    while holes.len() < p.n_holes {
        attempts += 1;
        if attempts > HOLE_ATTEMPTS {
            return Err(Error::Generator(format!(
                "placed only {} of {} holes; try fewer or smaller holes",
                holes.len(),
                p.n_holes
            )));
        }
        let s = uniform(&mut rng, p.hole_side.0, p.hole_side.1);
        if x1 - x0 < s + 2.0 * margin || y1 - y0 < s + 2.0 * margin {
            continue;
        }
        let hx = uniform(&mut rng, x0 + margin, x1 - margin - s);
        let hy = uniform(&mut rng, y0 + margin, y1 - margin - s);
        let clear = holes.iter().all(|&(ox, oy, os)| {
            hx + s + margin < ox || ox + os + margin < hx || hy + s + margin < oy || oy + os + margin < hy
        });
        if clear {
            holes.push((hx, hy, s));
        }
    }
    let rings = holes.iter().map(|&(hx, hy, s)| rect_ring(hx, hy, hx + s, hy + s)).collect();
    let f = PolygonWithHoles::new(rect_ring(x0, y0, x1, y1), rings)?;
    let mut disks = Vec::with_capacity(p.n_disks);
    while disks.len() < p.n_disks {
        let c = Point::new(uniform(&mut rng, x0, x1), uniform(&mut rng, y0, y1));
        if point_in_free_space(&f, c) {
            let r = uniform(&mut rng, p.radius.0, p.radius.1);
            disks.push(GeodesicDisk::new(disks.len() + 1, c, r));
        }
    }
    let mut meta = Map::new();
    meta.insert("name".into(), json!("random"));
    meta.insert("seed".into(), json!(p.seed));
    meta.insert(
        "generator".into(),
        json!({
            "n_disks": p.n_disks,
            "n_holes": p.n_holes,
            "bbox": [x0, y0, x1, y1],
            "radius": [p.radius.0, p.radius.1],
            "hole_side": [p.hole_side.0, p.hole_side.1],
        }),
    );
    Instance::new(f, disks, meta)
}

/// Named small instances.
pub const PRESETS: [&str; 7] = ["chain", "cluster", "triangle", "star", "cycle5", "holed", "empty"];

fn named(name: &str, f: PolygonWithHoles, disks: &[(f64, f64, f64)]) -> Result<Instance> {
    let disks = disks
        .iter()
        .enumerate()
        .map(|(k, &(x, y, r))| GeodesicDisk::new(k + 1, Point::new(x, y), r))
        .collect();
    let mut meta = Map::new();
    meta.insert("name".into(), json!(name));
    Instance::new(f, disks, meta)
}

/// Builds a preset by name. `chain` accepts any `n`; the others ignore it.
pub fn preset(name: &str, n: usize) -> Result<Instance> {
    match name {
        "chain" => {
            let f = PolygonWithHoles::rectangle(0.0, 0.0, 20.0 * n.max(5) as f64, 10.0)?;
            let d: Vec<_> = (1..=n).map(|k| (10.0 * k as f64, 5.0, 6.0)).collect();
            named("chain", f, &d)
        }
        "cluster" => named(
            "cluster",
            PolygonWithHoles::rectangle(0.0, 0.0, 10.0, 10.0)?,
            &[(4.0, 4.0, 3.0), (4.0, 6.0, 3.0), (6.0, 4.0, 3.0), (6.0, 6.0, 3.0)],
        ),
        "triangle" => named(
            "triangle",
            PolygonWithHoles::rectangle(0.0, 0.0, 20.0, 20.0)?,
            &[(6.0, 6.0, 4.0), (14.0, 6.0, 4.0), (10.0, 12.0, 4.0)],
        ),
        "star" => {
            let mut d = vec![(20.0, 20.0, 7.0)];
            for k in 0..5 {
                let t = k as f64 * std::f64::consts::TAU / 5.0;
                d.push((20.0 + 10.0 * t.cos(), 20.0 + 10.0 * t.sin(), 3.5));
            }
            named("star", PolygonWithHoles::rectangle(0.0, 0.0, 40.0, 40.0)?, &d)
        }
        "cycle5" => {
            let f = PolygonWithHoles::new(rect_ring(0.0, 0.0, 40.0, 40.0), vec![rect_ring(8.0, 8.0, 32.0, 32.0)])?;
            let d: Vec<_> = (0..5)
                .map(|k| {
                    let t = std::f64::consts::FRAC_PI_2 + k as f64 * std::f64::consts::TAU / 5.0;
                    let (c, s) = (t.cos(), t.sin());
                    // Project onto the square ring 4 units outside the hole.
                    let scale = 16.0 / c.abs().max(s.abs());
                    (20.0 + scale * c, 20.0 + scale * s, 12.5)
                })
                .collect();
            named("cycle5", f, &d)
        }
        "holed" => {
            let f = PolygonWithHoles::new(rect_ring(0.0, 0.0, 10.0, 10.0), vec![rect_ring(4.0, 4.0, 6.0, 6.0)])?;
            named("holed", f, &[(2.0, 5.0, 3.3), (8.0, 5.0, 3.3), (1.0, 1.0, 1.0), (9.0, 9.0, 1.0)])
        }
        "empty" => named("empty", PolygonWithHoles::rectangle(0.0, 0.0, 10.0, 10.0)?, &[]),
        other => Err(Error::InvalidParameter(format!(
            "unknown preset `{other}`; expected one of {}",
            PRESETS.join(", ")
        ))),
    }
}
