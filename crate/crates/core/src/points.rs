//! Point sets in the half-open unit cube and the `pointset v1` text format.
//!
//! ```text
//! # pointset v1
//! <N> <d>
//! x_11 ... x_1d
//! ...
//! ```
//!
//! Coordinates are written in scientific notation with 17 significant digits,
//! which is enough for every binary64 value to read back bit-identically.
//! After the first line, blank lines and lines starting with `#` are skipped.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub const FORMAT_HEADER: &str = "# pointset v1";

/// `N` points in `[0,1)^d`, stored row-major. Duplicate points are allowed and
/// count with multiplicity everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    n_points: usize,
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    /// Builds a validated point set.
    pub fn new(n_points: usize, dim: usize, coords: Vec<f64>) -> Result<Self> {
        let ps = Self {
            n_points,
            dim,
            coords,
        };
        validate_pointset(&ps)?;
        Ok(ps)
    }

    /// Builds a point set without validation. Callers must uphold the
    /// invariants; generators in this crate use it after constructing values
    /// that are in range by design.
    pub(crate) fn from_raw(n_points: usize, dim: usize, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len(), n_points * dim);
        Self {
            n_points,
            dim,
            coords,
        }
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// The `i`-th point as a slice of length `dim`.
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim.max(1))
    }

    /// Coordinate `j` of every point, in point order.
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.iter().map(|p| p[j]).collect()
    }

    /// Returns a copy with axes reordered so that new axis `k` is old axis `perm[k]`.
    pub fn permute_axes(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: perm.len(),
            });
        }
        let mut coords = Vec::with_capacity(self.coords.len());
        for p in self.iter() {
            coords.extend(perm.iter().map(|&a| p[a]));
        }
        Ok(Self::from_raw(self.n_points, self.dim, coords))
    }
}

/// Checks the shape and the half-open range of every coordinate.
pub fn validate_pointset(ps: &PointSet) -> Result<()> {
    let expected = ps.n_points * ps.dim;
    if ps.n_points == 0 || ps.dim == 0 || ps.coords.len() != expected {
        return Err(Error::ShapeMismatch {
            expected,
            found: ps.coords.len(),
        });
    }
    if let Some((index, &value)) = ps
        .coords
        .iter()
        .enumerate()
        .find(|(_, v)| !(0.0..1.0).contains(*v))
    {
        return Err(Error::CoordinateOutOfRange { index, value });
    }
    Ok(())
}

/// Parses a `pointset v1` stream. The header line may be given with or
/// without the leading `# `.
pub fn read_pointset<R: BufRead>(reader: R) -> Result<PointSet> {
    let mut lines = reader.lines().enumerate();

    let (_, first) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let first = first?;
    let header = first.trim();
    if header != FORMAT_HEADER && header != "pointset v1" {
        return Err(parse_err(
            1,
            format!("expected `{FORMAT_HEADER}`, found `{header}`"),
        ));
    }

    let mut content = lines.filter_map(|(i, line)| match line {
        Ok(l) => {
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                None
            } else {
                Some(Ok((i + 1, t.to_owned())))
            }
        }
        Err(e) => Some(Err(Error::from(e))),
    });

    let (shape_line, shape) = content
        .next()
        .ok_or_else(|| parse_err(2, "missing `<N> <d>` line"))??;
    let fields: Vec<&str> = shape.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(parse_err(
            shape_line,
            "expected exactly two integers `<N> <d>`",
        ));
    }
    let n_points: usize = fields[0]
        .parse()
        .map_err(|_| parse_err(shape_line, format!("invalid N `{}`", fields[0])))?;
    let dim: usize = fields[1]
        .parse()
        .map_err(|_| parse_err(shape_line, format!("invalid d `{}`", fields[1])))?;
    if n_points == 0 {
        return Err(parse_err(shape_line, "N must be positive"));
    }
    if dim == 0 {
        return Err(parse_err(shape_line, "d must be positive"));
    }

    let mut coords = Vec::with_capacity(n_points * dim);
    let mut rows = 0usize;
    for item in content {
        let (line, text) = item?;
        if rows == n_points {
            return Err(parse_err(
                line,
                format!("more than the declared {n_points} rows"),
            ));
        }
        let before = coords.len();
        for tok in text.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(line, format!("invalid number `{tok}`")))?;
            coords.push(v);
        }
        if coords.len() - before != dim {
            return Err(parse_err(
                line,
                format!("expected {dim} values, found {}", coords.len() - before),
            ));
        }
        rows += 1;
    }
    if rows != n_points {
        return Err(parse_err(
            shape_line,
            format!("declared {n_points} rows, found {rows}"),
        ));
    }
    PointSet::new(n_points, dim, coords)
}

/// Writes `ps` in `pointset v1` format.
pub fn write_pointset<W: Write>(ps: &PointSet, mut out: W) -> Result<()> {
    writeln!(out, "{FORMAT_HEADER}")?;
    writeln!(out, "{} {}", ps.n_points, ps.dim)?;
    let mut row = String::new();
    for p in ps.iter() {
        row.clear();
        for (j, v) in p.iter().enumerate() {
            if j > 0 {
                row.push(' ');
            }
            row.push_str(&format_f64(*v));
        }
        writeln!(out, "{row}")?;
    }
    out.flush()?;
    Ok(())
}

/// Scientific notation with 17 significant digits, e.g. `5.0000000000000000e-1`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ps(n: usize, d: usize, c: &[f64]) -> Result<PointSet> {
        PointSet::new(n, d, c.to_vec())
    }

    #[test]
    fn zero_is_legal_one_is_not() {
        assert!(ps(1, 1, &[0.0]).is_ok());
        assert!(matches!(
            ps(1, 1, &[1.0]),
            Err(Error::CoordinateOutOfRange { index: 0, value }) if value == 1.0
        ));
        assert!(matches!(
            ps(2, 1, &[0.5, 0.0_f64.next_down()]),
            Err(Error::CoordinateOutOfRange { index: 1, .. })
        ));
        assert!(matches!(
            ps(1, 1, &[f64::NAN]),
            Err(Error::CoordinateOutOfRange { .. })
        ));
    }

    #[test]
    fn shape_mismatch() {
        assert!(matches!(
            ps(2, 2, &[0.1, 0.2, 0.3]),
            Err(Error::ShapeMismatch {
                expected: 4,
                found: 3
            })
        ));
    }

    #[test]
    fn reads_simple_file() {
        let text = "# pointset v1\n2 1\n0.25\n0.75\n";
        let p = read_pointset(text.as_bytes()).unwrap();
        assert_eq!(p.n_points(), 2);
        assert_eq!(p.dim(), 1);
        assert_eq!(p.coords(), &[0.25, 0.75]);

        let bare = "pointset v1\n2 1\n0.25\n\n# comment\n7.5e-1\n";
        assert_eq!(read_pointset(bare.as_bytes()).unwrap(), p);
    }

    #[test]
    fn rejects_zero_points_and_wrong_row_count() {
        let zero = "# pointset v1\n0 1\n";
        assert!(matches!(
            read_pointset(zero.as_bytes()),
            Err(Error::Parse { line: 2, .. })
        ));
        let short = "# pointset v1\n3 1\n0.1\n0.2\n";
        assert!(matches!(
            read_pointset(short.as_bytes()),
            Err(Error::Parse { .. })
        ));
        let long = "# pointset v1\n1 1\n0.1\n0.2\n";
        assert!(matches!(
            read_pointset(long.as_bytes()),
            Err(Error::Parse { line: 4, .. })
        ));
        let wide = "# pointset v1\n1 2\n0.1\n";
        assert!(matches!(
            read_pointset(wide.as_bytes()),
            Err(Error::Parse { line: 3, .. })
        ));
        let bad = "# pointset v2\n1 1\n0.1\n";
        assert!(matches!(
            read_pointset(bad.as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn out_of_range_in_file_is_a_validation_error() {
        let text = "# pointset v1\n1 1\n1.0\n";
        assert!(matches!(
            read_pointset(text.as_bytes()),
            Err(Error::CoordinateOutOfRange { .. })
        ));
    }

    #[test]
    fn writes_seventeen_digits() {
        let p = ps(1, 1, &[0.5]).unwrap();
        let mut buf = Vec::new();
        write_pointset(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "# pointset v1\n1 1\n5.0000000000000000e-1\n");

        let p = ps(2, 2, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        let mut buf = Vec::new();
        write_pointset(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<&str> = text.lines().skip(2).collect();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.split_whitespace().count() == 2));
    }

    fn arb_pointset() -> impl Strategy<Value = PointSet> {
        (1usize..20, 1usize..5).prop_flat_map(|(n, d)| {
            proptest::collection::vec(
                prop_oneof![
                    0.0..1.0f64,
                    Just(0.0),
                    Just(1.0f64.next_down()),
                    Just(f64::MIN_POSITIVE),
                    Just(5e-324)
                ],
                n * d,
            )
            .prop_map(move |c| PointSet::new(n, d, c).unwrap())
        })
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(p in arb_pointset()) {
            let mut buf = Vec::new();
            write_pointset(&p, &mut buf).unwrap();
            let back = read_pointset(buf.as_slice()).unwrap();
            let a: Vec<u64> = p.coords().iter().map(|v| v.to_bits()).collect();
            let b: Vec<u64> = back.coords().iter().map(|v| v.to_bits()).collect();
            prop_assert_eq!(a, b);

            let mut again = Vec::new();
            write_pointset(&back, &mut again).unwrap();
            prop_assert_eq!(buf, again);
        }
    }
}
