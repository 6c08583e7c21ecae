//! The SVG subset accepted for region constraints: one `rect`, `polygon`, or
//! `path` using absolute `M`, `L`, `H`, `V` and `Z` commands.

use super::ConstraintError;
use crate::fragments::{num, Rect};

const SVG_NS: &str = "http://www.w3.org/2000/svg";
const CONTAINERS: [&str; 5] = ["svg", "g", "title", "desc", "metadata"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathCommand {
    MoveTo(f64, f64),
    LineTo(f64, f64),
    Horizontal(f64),
    Vertical(f64),
    Close,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SvgShape {
    Rect { x: f64, y: f64, width: f64, height: f64 },
    Polygon(Vec<(f64, f64)>),
    Path(Vec<PathCommand>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgRegion {
    pub shape: SvgShape,
    pub bbox: Rect,
}

impl SvgRegion {
    pub fn new(shape: SvgShape) -> Result<Self, ConstraintError> {
        let malformed = |m: &str| Err(ConstraintError::MalformedSvg(m.into()));
        match &shape {
            SvgShape::Rect { width, height, .. } if *width < 0.0 || *height < 0.0 => {
                return malformed("rect width and height must be non-negative")
            }
            SvgShape::Polygon(points) if points.len() < 3 => {
                return malformed("polygon needs at least three vertices")
            }
            SvgShape::Path(commands) if !matches!(commands.first(), Some(PathCommand::MoveTo(..))) => {
                return malformed("path must begin with M")
            }
            _ => {}
        }
        let vertices = vertices(&shape);
        if vertices.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return malformed("non-finite coordinate");
        }
        let bbox = bounding_box(&vertices);
        Ok(SvgRegion { shape, bbox })
    }

    /// Whether a path's final command closes it. Rects and polygons are
    /// always closed.
    pub fn is_closed(&self) -> bool {
        match &self.shape {
            SvgShape::Path(commands) => commands.last() == Some(&PathCommand::Close),
            _ => true,
        }
    }

    /// Standalone SVG document for the shape.
    pub fn to_svg(&self) -> String {
        let element = match &self.shape {
            SvgShape::Rect { x, y, width, height } => format!(
                r#"<rect x="{}" y="{}" width="{}" height="{}"/>"#,
                num(*x),
                num(*y),
                num(*width),
                num(*height)
            ),
            SvgShape::Polygon(points) => {
                let pts: Vec<String> = points
                    .iter()
                    .map(|(x, y)| format!("{},{}", num(*x), num(*y)))
                    .collect();
                format!(r#"<polygon points="{}"/>"#, pts.join(" "))
            }
            SvgShape::Path(commands) => {
                let d: Vec<String> = commands
                    .iter()
                    .map(|c| match c {
                        PathCommand::MoveTo(x, y) => format!("M {} {}", num(*x), num(*y)),
                        PathCommand::LineTo(x, y) => format!("L {} {}", num(*x), num(*y)),
                        PathCommand::Horizontal(x) => format!("H {}", num(*x)),
                        PathCommand::Vertical(y) => format!("V {}", num(*y)),
                        PathCommand::Close => "Z".to_string(),
                    })
                    .collect();
                format!(r#"<path d="{}"/>"#, d.join(" "))
            }
        };
        format!(r#"<svg xmlns="{SVG_NS}">{element}</svg>"#)
    }
}

/// Every coordinate the shape visits.
pub(crate) fn vertices(shape: &SvgShape) -> Vec<(f64, f64)> {
    match shape {
        SvgShape::Rect { x, y, width, height } => vec![(*x, *y), (x + width, y + height)],
        SvgShape::Polygon(points) => points.clone(),
        SvgShape::Path(commands) => {
            let mut out = Vec::with_capacity(commands.len());
            let (mut cx, mut cy) = (0.0, 0.0);
            let (mut sx, mut sy) = (0.0, 0.0);
            for c in commands {
                match *c {
                    PathCommand::MoveTo(x, y) => {
                        (cx, cy, sx, sy) = (x, y, x, y);
                    }
                    PathCommand::LineTo(x, y) => (cx, cy) = (x, y),
                    PathCommand::Horizontal(x) => cx = x,
                    PathCommand::Vertical(y) => cy = y,
                    PathCommand::Close => (cx, cy) = (sx, sy),
                }
                out.push((cx, cy));
            }
            out
        }
    }
}

fn bounding_box(points: &[(f64, f64)]) -> Rect {
    let (mut x0, mut y0) = (f64::INFINITY, f64::INFINITY);
    let (mut x1, mut y1) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &(x, y) in points {
        x0 = x0.min(x);
        y0 = y0.min(y);
        x1 = x1.max(x);
        y1 = y1.max(y);
    }
    if points.is_empty() {
        return Rect::new(0.0, 0.0, 0.0, 0.0);
    }
    Rect::new(x0, y0, x1 - x0, y1 - y0)
}

/// Extract the single supported shape from an SVG document.
pub fn parse_svg_constraint(payload: &str) -> Result<SvgRegion, ConstraintError> {
    let doc =
        roxmltree::Document::parse(payload).map_err(|e| ConstraintError::MalformedSvg(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "svg" {
        return Err(ConstraintError::UnsupportedSvg(format!(
            "root element is <{}>, expected <svg>",
            root.tag_name().name()
        )));
    }
    let mut shapes = Vec::new();
    for node in root.descendants().filter(|n| n.is_element()) {
        let name = node.tag_name().name();
        match name {
            "rect" | "polygon" | "path" => shapes.push(node),
            n if CONTAINERS.contains(&n) => {}
            other => {
                return Err(ConstraintError::UnsupportedSvg(format!(
                    "<{other}> is outside the supported subset (rect, polygon, path)"
                )))
            }
        }
    }
    let [shape] = shapes.as_slice() else {
        return Err(ConstraintError::UnsupportedSvg(format!(
            "expected exactly one shape element, found {}",
            shapes.len()
        )));
    };
    let attr = |name: &str| shape.attribute(name);
    let number = |name: &str, default: Option<f64>| -> Result<f64, ConstraintError> {
        match attr(name) {
            Some(v) => parse_length(v)
                .ok_or_else(|| ConstraintError::MalformedSvg(format!("{name}={v:?} is not a number"))),
            None => default.ok_or_else(|| ConstraintError::MalformedSvg(format!("missing {name}"))),
        }
    };
    let parsed = match shape.tag_name().name() {
        "rect" => SvgShape::Rect {
            x: number("x", Some(0.0))?,
            y: number("y", Some(0.0))?,
            width: number("width", None)?,
            height: number("height", None)?,
        },
        "polygon" => {
            let points =
                attr("points").ok_or_else(|| ConstraintError::MalformedSvg("missing points".into()))?;
            let nums = scan_numbers(points)?;
            if nums.len() % 2 != 0 {
                return Err(ConstraintError::MalformedSvg(
                    "odd number of polygon coordinates".into(),
                ));
            }
            SvgShape::Polygon(nums.chunks(2).map(|p| (p[0], p[1])).collect())
        }
        _ => SvgShape::Path(parse_path_data(
            attr("d").ok_or_else(|| ConstraintError::MalformedSvg("missing d".into()))?,
        )?),
    };
    SvgRegion::new(parsed)
}

fn parse_length(v: &str) -> Option<f64> {
    let v = v.trim();
    let v = v.strip_suffix("px").unwrap_or(v);
    v.parse().ok().filter(|n: &f64| n.is_finite())
}

fn scan_numbers(text: &str) -> Result<Vec<f64>, ConstraintError> {
    let mut scanner = Scanner {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    loop {
        scanner.skip_separators();
        if scanner.at_end() {
            return Ok(out);
        }
        out.push(scanner.number()?);
    }
}

/// Parse path data restricted to absolute M/L/H/V/Z.
pub(crate) fn parse_path_data(d: &str) -> Result<Vec<PathCommand>, ConstraintError> {
    let mut s = Scanner {
        src: d.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    let mut current: Option<u8> = None;
    loop {
        s.skip_separators();
        let Some(c) = s.peek() else { break };
        let command = if c.is_ascii_alphabetic() {
            s.pos += 1;
            c
        } else {
            // implicit repetition; a repeated moveto becomes lineto
            match current {
                Some(b'M') => b'L',
                Some(b'Z') | None => {
                    return Err(ConstraintError::MalformedSvg(format!(
                        "expected a command at byte {}",
                        s.pos
                    )))
                }
                Some(other) => other,
            }
        };
        match command {
            b'M' => out.push(PathCommand::MoveTo(s.number()?, s.coord()?)),
            b'L' => out.push(PathCommand::LineTo(s.number()?, s.coord()?)),
            b'H' => out.push(PathCommand::Horizontal(s.number()?)),
            b'V' => out.push(PathCommand::Vertical(s.number()?)),
            b'Z' | b'z' => out.push(PathCommand::Close),
            b'm' | b'l' | b'h' | b'v' => {
                return Err(ConstraintError::UnsupportedSvg(format!(
                    "relative path command {:?}",
                    command as char
                )))
            }
            other => {
                return Err(ConstraintError::UnsupportedSvg(format!(
                    "path command {:?} (only M, L, H, V, Z are supported)",
                    other as char
                )))
            }
        }
        current = Some(if command == b'z' { b'Z' } else { command });
    }
    if out.is_empty() {
        return Err(ConstraintError::MalformedSvg("empty path data".into()));
    }
    Ok(out)
}

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Scanner<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_separators(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\n' | b'\r' | b',')) {
            self.pos += 1;
        }
    }

    fn coord(&mut self) -> Result<f64, ConstraintError> {
        self.skip_separators();
        self.number()
    }

    fn number(&mut self) -> Result<f64, ConstraintError> {
        self.skip_separators();
        let start = self.pos;
        if matches!(self.peek(), Some(b'+' | b'-')) {
            self.pos += 1;
        }
        let mut digits = 0;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
            digits += 1;
        }
        if self.peek() == Some(b'.') {
            self.pos += 1;
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
                digits += 1;
            }
        }
        if digits > 0 && matches!(self.peek(), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            let exp_start = self.pos;
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
            if self.pos == exp_start {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default();
        if digits == 0 {
            return Err(ConstraintError::MalformedSvg(format!(
                "expected a number at byte {start}"
            )));
        }
        text.parse()
            .ok()
            .filter(|n: &f64| n.is_finite())
            .ok_or_else(|| ConstraintError::MalformedSvg(format!("bad number {text:?}")))
    }
}
