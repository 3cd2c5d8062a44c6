//! Text formats for obstacle streams and subdivision scenes.
//!
//! Both formats are line oriented; `#` starts a comment and blank lines
//! are skipped. Coordinates are integers or `num/den` rationals, parsed
//! exactly. The first two directives must declare `s` and `t`. Parsing is
//! total: every input yields either a parsed value or an error carrying
//! the offending line number.
//!
//! Stream files describe bodies for the separation index:
//!
//! ```text
//! s 0 0
//! t 10 0
//! box -2 -1 -1 2
//! poly 3 1 5 1 4 3
//! ```
//!
//! Scene files describe obstacles for the subdivision engine, whose
//! configuration space is the unit box:
//!
//! ```text
//! s 1/4 1/2
//! t 3/4 1/2
//! disc 1/2 1/2 1/8
//! annulus 1/2 1/2 1/8 3/8
//! maxdepth 8
//! ```

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::geom::{Anchor, ConvexBody, GeomError, Point, Rational};
use crate::subdivision::Obstacle;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    NonconvexPolygon,
    ContainsTerminal,
    InvalidObstacle(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "{msg}"),
            ParseErrorKind::NonconvexPolygon => {
                write!(f, "polygon vertices are not in convex position")
            }
            ParseErrorKind::ContainsTerminal => {
                write!(f, "shape contains an anchor point")
            }
            ParseErrorKind::InvalidObstacle(msg) => write!(f, "{msg}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    fn syntax(line: usize, msg: impl Into<String>) -> ParseError {
        ParseError { line, kind: ParseErrorKind::Syntax(msg.into()) }
    }
}

/// Parsed obstacle stream.
#[derive(Debug)]
pub struct StreamSpec {
    pub anchor: Anchor,
    pub bodies: Vec<ConvexBody>,
    pub warnings: Vec<String>,
}

/// Parsed subdivision scene.
#[derive(Debug)]
pub struct SceneSpec {
    pub anchor: Anchor,
    pub obstacles: Vec<Obstacle>,
    pub max_depth: Option<u32>,
    pub warnings: Vec<String>,
}

/// Exact rational from `int` or `num/den` notation.
pub fn parse_rational(token: &str) -> Option<Rational> {
    match token.split_once('/') {
        None => BigInt::from_str(token).ok().map(Rational::from_integer),
        Some((num, den)) => {
            let num = BigInt::from_str(num).ok()?;
            let den = BigInt::from_str(den).ok()?;
            if den.is_zero() { None } else { Some(Rational::new(num, den)) }
        }
    }
}

fn parse_coords(line: usize, tokens: &[&str]) -> Result<Vec<Rational>, ParseError> {
    tokens
        .iter()
        .map(|tok| {
            parse_rational(tok)
                .ok_or_else(|| ParseError::syntax(line, format!("invalid number `{tok}`")))
        })
        .collect()
}

fn parse_point(line: usize, tokens: &[&str]) -> Result<Point, ParseError> {
    if tokens.len() != 2 {
        return Err(ParseError::syntax(line, "expected two coordinates"));
    }
    let mut coords = parse_coords(line, tokens)?;
    let y = coords.pop().unwrap();
    let x = coords.pop().unwrap();
    Ok(Point::new(x, y))
}

/// Builds a counterclockwise convex polygon from a flat coordinate list,
/// reversing clockwise input with a warning.
fn parse_polygon(
    line: usize,
    tokens: &[&str],
    warnings: &mut Vec<String>,
) -> Result<ConvexBody, ParseError> {
    if tokens.len() < 6 || !tokens.len().is_multiple_of(2) {
        return Err(ParseError::syntax(
            line,
            "poly needs at least three x y vertex pairs",
        ));
    }
    let coords = parse_coords(line, tokens)?;
    let points: Vec<Point> = coords
        .chunks(2)
        .map(|c| Point::new(c[0].clone(), c[1].clone()))
        .collect();
    match ConvexBody::new(points.clone()) {
        Ok(body) => Ok(body),
        Err(GeomError::ConvexViolation) => {
            let mut reversed = points;
            reversed.reverse();
            match ConvexBody::new(reversed) {
                Ok(body) => {
                    warnings.push(format!(
                        "line {line}: clockwise polygon reversed to counterclockwise"
                    ));
                    Ok(body)
                }
                Err(_) => Err(ParseError { line, kind: ParseErrorKind::NonconvexPolygon }),
            }
        }
        Err(_) => Err(ParseError { line, kind: ParseErrorKind::NonconvexPolygon }),
    }
}

/// A directive line: its 1-based line number and whitespace tokens.
type Directive<'a> = (usize, Vec<&'a str>);

/// Directives of a file with their line numbers, comments stripped.
fn directives(text: &str) -> Vec<Directive<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(idx, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                None
            } else {
                Some((idx + 1, line.split_whitespace().collect()))
            }
        })
        .collect()
}

/// Reads the leading `s` and `t` declarations common to both formats.
fn parse_anchor<'a>(
    items: &'a [Directive<'a>],
    text_lines: usize,
) -> Result<(Anchor, &'a [Directive<'a>]), ParseError> {
    let missing = || ParseError::syntax(text_lines + 1, "expected `s <x> <y>` and `t <x> <y>`");
    let (s_line, s_tokens) = items.first().ok_or_else(missing)?;
    if s_tokens[0] != "s" {
        return Err(ParseError::syntax(*s_line, "first directive must be `s <x> <y>`"));
    }
    let s = parse_point(*s_line, &s_tokens[1..])?;
    let (t_line, t_tokens) = items.get(1).ok_or_else(missing)?;
    if t_tokens[0] != "t" {
        return Err(ParseError::syntax(*t_line, "second directive must be `t <x> <y>`"));
    }
    let t = parse_point(*t_line, &t_tokens[1..])?;
    let anchor = Anchor::new(s, t)
        .map_err(|_| ParseError::syntax(*t_line, "anchor points must be distinct"))?;
    Ok((anchor, &items[2..]))
}

/// Parses a stream of bodies for the separation index.
pub fn parse_stream(text: &str) -> Result<StreamSpec, ParseError> {
    let items = directives(text);
    let (anchor, rest) = parse_anchor(&items, text.lines().count())?;
    let mut bodies = Vec::new();
    let mut warnings = Vec::new();
    for (line, tokens) in rest {
        let body = match tokens[0] {
            "box" => {
                if tokens.len() != 5 {
                    return Err(ParseError::syntax(
                        *line,
                        "box needs `box <xmin> <ymin> <xmax> <ymax>`",
                    ));
                }
                let coords = parse_coords(*line, &tokens[1..])?;
                ConvexBody::axis_box(
                    coords[0].clone(),
                    coords[1].clone(),
                    coords[2].clone(),
                    coords[3].clone(),
                )
                .map_err(|_| {
                    ParseError::syntax(*line, "box needs xmin < xmax and ymin < ymax")
                })?
            }
            "poly" => parse_polygon(*line, &tokens[1..], &mut warnings)?,
            "s" | "t" => {
                return Err(ParseError::syntax(*line, "anchors may only be declared once"));
            }
            other => {
                return Err(ParseError::syntax(*line, format!("unknown directive `{other}`")));
            }
        };
        if body.contains(anchor.source()) || body.contains(anchor.target()) {
            return Err(ParseError { line: *line, kind: ParseErrorKind::ContainsTerminal });
        }
        bodies.push(body);
    }
    Ok(StreamSpec { anchor, bodies, warnings })
}

/// Parses a subdivision scene.
pub fn parse_scene(text: &str) -> Result<SceneSpec, ParseError> {
    let items = directives(text);
    let (anchor, rest) = parse_anchor(&items, text.lines().count())?;
    let mut obstacles = Vec::new();
    let mut max_depth = None;
    let mut warnings = Vec::new();
    for (line, tokens) in rest {
        match tokens[0] {
            "disc" => {
                if tokens.len() != 4 {
                    return Err(ParseError::syntax(*line, "disc needs `disc <cx> <cy> <r>`"));
                }
                let coords = parse_coords(*line, &tokens[1..])?;
                let center = Point::new(coords[0].clone(), coords[1].clone());
                let obstacle = Obstacle::disc(center, coords[2].clone()).map_err(|e| {
                    ParseError { line: *line, kind: ParseErrorKind::InvalidObstacle(e.to_string()) }
                })?;
                obstacles.push((*line, obstacle));
            }
            "annulus" => {
                if tokens.len() != 5 {
                    return Err(ParseError::syntax(
                        *line,
                        "annulus needs `annulus <cx> <cy> <r_in> <r_out>`",
                    ));
                }
                let coords = parse_coords(*line, &tokens[1..])?;
                let center = Point::new(coords[0].clone(), coords[1].clone());
                let obstacle = Obstacle::annulus(center, coords[2].clone(), coords[3].clone())
                    .map_err(|e| ParseError {
                        line: *line,
                        kind: ParseErrorKind::InvalidObstacle(e.to_string()),
                    })?;
                obstacles.push((*line, obstacle));
            }
            "poly" => {
                let body = parse_polygon(*line, &tokens[1..], &mut warnings)?;
                obstacles.push((*line, Obstacle::polygon(body)));
            }
            "maxdepth" => {
                if tokens.len() != 2 {
                    return Err(ParseError::syntax(*line, "maxdepth needs one integer"));
                }
                if max_depth.is_some() {
                    return Err(ParseError::syntax(*line, "maxdepth declared twice"));
                }
                let d: u32 = tokens[1].parse().map_err(|_| {
                    ParseError::syntax(*line, format!("invalid depth `{}`", tokens[1]))
                })?;
                max_depth = Some(d);
            }
            "s" | "t" => {
                return Err(ParseError::syntax(*line, "anchors may only be declared once"));
            }
            other => {
                return Err(ParseError::syntax(*line, format!("unknown directive `{other}`")));
            }
        }
    }
    for (line, obstacle) in &obstacles {
        if obstacle.blocks(anchor.source()) || obstacle.blocks(anchor.target()) {
            return Err(ParseError { line: *line, kind: ParseErrorKind::ContainsTerminal });
        }
    }
    Ok(SceneSpec {
        anchor,
        obstacles: obstacles.into_iter().map(|(_, o)| o).collect(),
        max_depth,
        warnings,
    })
}
