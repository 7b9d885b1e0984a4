use efl_core::hybrid::FavourableDivision;
use efl_core::{Cut, SearchParams};
use serde_json::{json, Map, Number, Value};

/// Rounds to 12 significant digits; serde_json then prints the shortest round-trip form.
pub fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

pub fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().map(round12).and_then(Number::from_f64) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn to_text(mut v: Value) -> String {
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("json values always serialize");
    s.push('\n');
    s
}

pub fn cut(c: &Cut) -> Value {
    json!(c.lengths())
}

pub fn params(p: &SearchParams) -> Value {
    json!({
        "grid": p.grid,
        "dedup_tol": p.dedup_tol,
        "refine": p.refine_levels,
    })
}

/// Boxes as 1-based tile lists, in box order.
pub fn favourable(d: &FavourableDivision) -> Map<String, Value> {
    let boxes: Vec<Vec<usize>> = d.boxes.contents().iter().map(|s| s.one_based()).collect();
    let mut m = Map::new();
    m.insert("cut".into(), cut(&d.cut));
    m.insert("boxes".into(), json!(boxes));
    m.insert(
        "matching".into(),
        json!(d.matching.iter().map(|b| b + 1).collect::<Vec<_>>()),
    );
    m.insert("profile".into(), json!(d.boxes.profile()));
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding() {
        assert_eq!(round12(1.0 / 3.0), 0.333333333333);
        assert_eq!(round12(0.1 + 0.2), 0.3);
        assert_eq!(round12(0.0), 0.0);
        assert_eq!(round12(123_456_789.123_456_79), 123456789.123);
    }

    #[test]
    fn nested_values_are_rounded() {
        let text = to_text(json!({"a": [2.0f64 / 3.0, 1], "b": {"c": 0.1 + 0.7}}));
        assert!(text.contains("0.666666666667"));
        assert!(text.contains("0.8"));
        assert!(text.contains("1"));
    }
}
