use std::str::FromStr;

use num_traits::Zero;
use thiserror::Error;
use tropconic::exactgeom::{ClipBox, Point2, Rational};
use tropconic::tropical::{Config, TropPoint};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InputError {
    #[error("malformed rational {0:?}")]
    Rational(String),
    #[error("point {0:?} needs 2 or 3 coordinates")]
    Coordinates(String),
    #[error("expected {expected} points, got {found}")]
    Arity { expected: &'static str, found: usize },
    #[error("box needs four values xmin,xmax,ymin,ymax with xmin < xmax and ymin < ymax")]
    Box,
    #[error("{0}")]
    Degenerate(String),
}

/// Integers or `a/b`.
pub fn rational(s: &str) -> Result<Rational, InputError> {
    let t = s.trim();
    let bad = || InputError::Rational(t.to_string());
    if let Some((_, den)) = t.split_once('/') {
        if den.trim().parse::<i128>().is_ok_and(|d| d.is_zero()) {
            return Err(bad());
        }
    }
    Rational::from_str(t).map_err(|_| bad())
}

fn coords(s: &str) -> Result<Vec<Rational>, InputError> {
    s.split(',').map(rational).collect()
}

/// Three coordinates are a point of the plane; two are read as `(0, x1, x2)`.
pub fn point(s: &str) -> Result<TropPoint, InputError> {
    let c = coords(s)?;
    match <[Rational; 3]>::try_from(c) {
        Ok(c3) => Ok(TropPoint::new(c3)),
        Err(c) if c.len() == 2 => {
            let [a, b]: [Rational; 2] = c.try_into().expect("two");
            Ok(TropPoint::gauge(a, b))
        }
        Err(_) => Err(InputError::Coordinates(s.trim().to_string())),
    }
}

pub fn points(s: &str) -> Result<Config, InputError> {
    let pts: Vec<TropPoint> = s.split(';').map(point).collect::<Result<_, _>>()?;
    let n = pts.len();
    Config::new(pts).map_err(|_| InputError::Arity { expected: "2 or 3", found: n })
}

pub fn plane_point(s: &str) -> Result<Point2, InputError> {
    let c = coords(s)?;
    let [a, b]: [Rational; 2] = c.try_into().map_err(|_| InputError::Coordinates(s.trim().to_string()))?;
    Ok((a, b))
}

pub fn clip_box(s: &str) -> Result<ClipBox, InputError> {
    let c = coords(s)?;
    let [x0, x1, y0, y1]: [Rational; 4] = c.try_into().map_err(|_| InputError::Box)?;
    if x0 >= x1 || y0 >= y1 {
        return Err(InputError::Box);
    }
    Ok(ClipBox::new((x0, y0), (x1, y1)))
}
