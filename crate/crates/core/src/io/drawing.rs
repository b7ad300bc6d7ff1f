use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde_json::{json, Value};

use super::canonical_json;
use crate::drawing::geometry::{Point, Q};
use crate::drawing::LevelDrawing;
use crate::error::{Error, Result};
use crate::model::{subdivide_to_proper, LevelGraph};

fn int_value(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(x) => json!(x),
        Err(_) => json!(n.to_string()),
    }
}

fn point_value(p: &Point) -> Value {
    json!([int_value(p.x.numer()), int_value(p.x.denom()), int_value(p.y.numer()), int_value(p.y.denom())])
}

fn read_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

fn read_point(v: &Value) -> Result<Point> {
    let parts: Vec<BigInt> = v
        .as_array()
        .filter(|a| a.len() == 4)
        .and_then(|a| a.iter().map(read_int).collect::<Option<Vec<_>>>())
        .ok_or_else(|| Error::Parse(format!("expected [num, den, num, den], got {v}")))?;
    if parts[1] == BigInt::from(0) || parts[3] == BigInt::from(0) {
        return Err(Error::Parse(format!("zero denominator in {v}")));
    }
    Ok(Point::new(
        Q::new(parts[0].clone(), parts[1].clone()),
        Q::new(parts[2].clone(), parts[3].clone()),
    ))
}

/// `{"coords": {id: [num, den, num, den]}, "regions": {cluster: [[num,
/// den, num, den], ...]}}`; bends are listed under `coords` by dummy id.
pub fn drawing_to_sidecar(d: &LevelDrawing) -> Result<String> {
    let coords: BTreeMap<&String, Value> = d.points.iter().map(|(id, p)| (id, point_value(p))).collect();
    let regions: BTreeMap<&String, Vec<Value>> =
        d.regions.iter().map(|(id, r)| (id, r.iter().map(point_value).collect())).collect();
    canonical_json(&json!({ "coords": coords, "regions": regions }))
}

/// Reads a drawing sidecar for `g`. Every long edge needs a coordinate for
/// each of its dummies.
pub fn drawing_from_sidecar(g: &LevelGraph, text: &str) -> Result<LevelDrawing> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| Error::Parse("drawing sidecar must be an object".into()))?;
    if let Some(k) = obj.keys().find(|k| *k != "coords" && *k != "regions") {
        return Err(Error::Parse(format!("unknown field {k:?} in drawing sidecar")));
    }
    let mut d = LevelDrawing::default();
    let coords = obj
        .get("coords")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Parse("missing \"coords\"".into()))?;
    for (id, p) in coords {
        d.points.insert(id.clone(), read_point(p)?);
    }
    if let Some(regions) = obj.get("regions") {
        let regions = regions
            .as_object()
            .ok_or_else(|| Error::Parse("\"regions\" must be an object".into()))?;
        for (id, pts) in regions {
            let pts = pts
                .as_array()
                .ok_or_else(|| Error::Parse(format!("region {id} must be a list")))?
                .iter()
                .map(read_point)
                .collect::<Result<_>>()?;
            d.regions.insert(id.clone(), pts);
        }
    }
    let (_, map) = subdivide_to_proper(g);
    for &(u, v) in g.edges() {
        let (a, b) = (g.id(u).to_string(), g.id(v).to_string());
        let mut line = vec![a.clone()];
        for id in map.chains.get(&(a.clone(), b.clone())).into_iter().flatten() {
            if !d.points.contains_key(id) {
                return Err(Error::Parse(format!("no coordinate for bend {id}")));
            }
            d.bends.insert(id.clone());
            line.push(id.clone());
        }
        line.push(b);
        d.edges.push(line);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drawing::draw_from_ordering;
    use crate::drawing::geometry::ratio;
    use crate::oracles::LevelOrdering;

    #[test]
    fn sidecar_round_trip() {
        let g = LevelGraph::new([("a", 0), ("c", 1), ("d", 2)], [("a", "d"), ("a", "c")]).unwrap();
        let o = LevelOrdering::new(vec![vec!["a".into()], vec!["a-d#1".into(), "c".into()], vec!["d".into()]]);
        let mut d = draw_from_ordering(&g, &o).unwrap();
        d.regions.insert("r".into(), vec![Point::new(ratio(1, 3), ratio(-7, 2))]);
        let text = drawing_to_sidecar(&d).unwrap();
        assert!(text.contains("\"a-d#1\""));
        let back = drawing_from_sidecar(&g, &text).unwrap();
        assert_eq!(back, d);
        assert!(drawing_from_sidecar(&g, r#"{"coords":{"a":[1,1,0,1]}}"#).is_err());
    }
}
