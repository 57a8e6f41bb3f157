//! Point-set files: one point per CSV row with an optional trailing
//! `honest`/`byz` column, or JSON `{"points": [[...]], "labels": [...]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pointset::{Label, PointSet};

#[derive(Debug, Serialize, Deserialize)]
struct JsonPoints {
    points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Label>>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_csv(text: &str) -> Result<PointSet> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let mut points: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<Label> = Vec::new();
    let mut labelled: Option<bool> = None;
    let mut dim: Option<usize> = None;

    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, 0, e.to_string())
        })?;
        let line = record.position().map_or(points.len() + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        let last = record.len() - 1;
        let label = record.get(last).and_then(|s| s.parse::<f64>().err().and_then(|_| Label::parse(s)));
        match (labelled, label.is_some()) {
            (None, has) => labelled = Some(has),
            (Some(prev), has) if prev != has => {
                return Err(parse_err(line, last + 1, "label column present on some rows only"));
            }
            _ => {}
        }
        let numeric = if label.is_some() { last } else { record.len() };
        let mut point = Vec::with_capacity(numeric);
        for (col, field) in record.iter().take(numeric).enumerate() {
            let value: f64 = field
                .parse()
                .map_err(|_| parse_err(line, col + 1, format!("expected a number, found {field:?}")))?;
            if !value.is_finite() {
                return Err(parse_err(line, col + 1, format!("non-finite value {field:?}")));
            }
            point.push(value);
        }
        if point.is_empty() {
            return Err(parse_err(line, 1, "row has no coordinates"));
        }
        match dim {
            None => dim = Some(point.len()),
            Some(d) if d != point.len() => {
                return Err(parse_err(
                    line,
                    point.len().min(d) + 1,
                    format!("expected {d} coordinates, found {}", point.len()),
                ));
            }
            _ => {}
        }
        points.push(point);
        labels.extend(label);
    }

    if labelled == Some(true) {
        PointSet::with_labels(points, labels)
    } else {
        PointSet::new(points)
    }
}

/// One row per point, shortest round-trip decimal formatting.
pub fn write_csv(points: &PointSet) -> String {
    let mut out = String::new();
    for (i, p) in points.iter().enumerate() {
        let row: Vec<String> = p.iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(","));
        if let Some(labels) = points.labels() {
            out.push(',');
            out.push_str(labels[i].as_str());
        }
        out.push('\n');
    }
    out
}

pub fn parse_json(text: &str) -> Result<PointSet> {
    let raw: JsonPoints =
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.column(), e.to_string()))?;
    match raw.labels {
        Some(labels) => PointSet::with_labels(raw.points, labels),
        None => PointSet::new(raw.points),
    }
}

pub fn write_json(points: &PointSet) -> String {
    let raw = JsonPoints {
        points: points.points().to_vec(),
        labels: points.labels().map(<[Label]>::to_vec),
    };
    serde_json::to_string(&raw).expect("point sets serialize")
}

/// Reads a point set, choosing JSON for `.json` files and CSV otherwise.
pub fn read_points(path: &Path) -> Result<PointSet> {
    let text = std::fs::read_to_string(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        parse_json(&text)
    } else {
        parse_csv(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_plain_rows() {
        let p = parse_csv("0\n1\n10\n").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.point(2), &[10.0]);
        assert!(p.labels().is_none());
    }

    #[test]
    fn parses_labels_and_comments() {
        let p = parse_csv("# header\n1.5, 2, honest\n\n-3,4e2,byz\n").unwrap();
        assert_eq!(p.points(), &[vec![1.5, 2.0], vec![-3.0, 400.0]]);
        assert_eq!(p.labels().unwrap(), &[Label::Honest, Label::Byzantine]);
    }

    #[test]
    fn reports_line_and_column() {
        match parse_csv("1,2\n3,x\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 2)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_csv("1,2\n3,4,5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_csv("1,honest\n2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_csv("1,nan\n"), Err(Error::Parse { column: 2, .. })));
        assert!(matches!(parse_csv(""), Err(Error::EmptyInput)));
    }

    #[test]
    fn json_input() {
        let p = parse_json(r#"{"points": [[0, 1], [2, 3]], "labels": ["honest", "byz"]}"#).unwrap();
        assert_eq!(p.byzantine_count(), 1);
        assert_eq!(parse_json(&write_json(&p)).unwrap(), p);
        assert!(matches!(parse_json("{\"points\": [[0,"), Err(Error::Parse { line: 1, .. })));
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_bit_identical(
            rows in prop::collection::vec(prop::collection::vec(-1e12f64..1e12, 3), 1..20),
            labelled in any::<bool>(),
        ) {
            let set = if labelled {
                let labels = (0..rows.len()).map(|i| if i % 3 == 0 { Label::Byzantine } else { Label::Honest }).collect();
                PointSet::with_labels(rows, labels).unwrap()
            } else {
                PointSet::new(rows).unwrap()
            };
            let text = write_csv(&set);
            let back = parse_csv(&text).unwrap();
            prop_assert_eq!(&back, &set);
            prop_assert_eq!(write_csv(&back), text);
        }
    }
}
