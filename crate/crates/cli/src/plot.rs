//! Scatter plot of exported graph samples as a standalone SVG.

use std::fmt::Write;

use anyhow::{anyhow, bail, Result};
use graphdim::arith::{dyadic_rational, rational_to_f64, Rational};
use num_bigint::BigInt;

const HEADER: [&str; 6] = ["x_num", "x_den", "y_mantissa", "y_scale", "x_decimal", "y_decimal"];

const SIZE: f64 = 560.0;
const MARGIN: f64 = 60.0;
const SIDE: f64 = SIZE - 2.0 * MARGIN;

/// `(x, y)` per data row of an export CSV. Errors name the 1-based data row.
pub fn read_points(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| anyhow!("header: {e}"))?;
    if header.iter().ne(HEADER) {
        bail!("header: expected {}", HEADER.join(","));
    }
    let mut points = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let row = k + 1;
        let record = record.map_err(|e| anyhow!("row {row}: {e}"))?;
        let int = |col: usize| -> Result<BigInt> {
            record[col]
                .parse()
                .map_err(|_| anyhow!("row {row}: {} is not an integer: {:?}", HEADER[col], &record[col]))
        };
        let (num, den) = (int(0)?, int(1)?);
        if den <= BigInt::from(0) {
            bail!("row {row}: x_den must be positive");
        }
        let scale: u64 = record[3]
            .parse()
            .map_err(|_| anyhow!("row {row}: y_scale is not a nonnegative integer: {:?}", &record[3]))?;
        let x = Rational::new(num, den);
        let y = dyadic_rational(int(2)?, scale);
        points.push((rational_to_f64(&x), rational_to_f64(&y)));
    }
    Ok(points)
}

/// Unit square with `(0,0)` at the lower left corner, one circle per point.
pub fn render(points: &[(f64, f64)]) -> String {
    let px = |x: f64| MARGIN + SIDE * x;
    let py = |y: f64| MARGIN + SIDE * (1.0 - y);
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<g class="axes" stroke="black" fill="none"><rect x="{MARGIN}" y="{MARGIN}" width="{SIDE}" height="{SIDE}"/></g>"#
    );
    let _ = writeln!(svg, r#"<g class="labels" font-family="sans-serif" font-size="14">"#);
    for (text, x, y, anchor) in [
        ("0", px(0.0), py(0.0) + 20.0, "middle"),
        ("1", px(1.0), py(0.0) + 20.0, "middle"),
        ("0", px(0.0) - 8.0, py(0.0) + 5.0, "end"),
        ("1", px(0.0) - 8.0, py(1.0) + 5.0, "end"),
        ("x", px(0.5), py(0.0) + 40.0, "middle"),
        ("F(x)", px(0.0) - 30.0, py(0.5), "end"),
    ] {
        let _ = writeln!(svg, r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{text}</text>"#);
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, r#"<g class="markers" fill="steelblue">"#);
    for &(x, y) in points {
        let _ = writeln!(svg, r#"<circle cx="{:.3}" cy="{:.3}" r="1.5"/>"#, px(x), py(y));
    }
    let _ = writeln!(svg, "</g>");
    svg.push_str("</svg>\n");
    svg
}
