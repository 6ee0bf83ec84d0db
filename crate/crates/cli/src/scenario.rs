//! Line-oriented scenario configuration: `section.key = value` per line,
//! `#` comments, unknown keys rejected with their line number.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scenario line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    /// Resolved key → value map (defaults applied), in sorted order.
    pub keys: BTreeMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "ambient.kind",
    "ambient.dim",
    "ambient.radius",
    "ambient.curvature",
    "ambient.periods",
    "shape.kind",
    "shape.nodes",
    "shape.radius",
    "shape.a",
    "shape.b",
    "shape.r1",
    "shape.r2",
    "shape.half-length",
    "shape.bump-center",
    "shape.bump-height",
    "shape.bump-width",
    "shape.amp",
    "shape.freq",
    "shape.band",
    "shape.center-x",
    "shape.center-y",
    "shape.perturb-eta",
    "shape.perturb-width",
    "shape.perturb-theta",
    "shape.perturb-mode",
    "flow.scheme",
    "flow.cfl",
    "flow.t-max",
    "flow.dt",
    "flow.gauge",
    "monitors.record-every",
    "monitors.coupled",
    "monitors.metric-evolution",
    "monitors.gradient",
    "monitors.snapshots",
    "audit.kind",
    "audit.center-node",
    "audit.r0",
    "audit.epsilon",
    "audit.alpha",
    "audit.c0",
    "audit.k",
    "audit.t-bar",
    "audit.t-window",
    "output.dir",
    "seed",
    "expect.mean-radius",
    "expect.mean-radius-rtol",
    "expect.sup-h-max",
    "expect.volume-monotone",
    "expect.diffeo",
    "expect.monotonicity",
    "expect.audit-pass",
    "expect.equivalence-ratio",
    "expect.equivalence-rtol",
    "expect.displacement-exponent-lo",
    "expect.displacement-exponent-hi",
    "expect.order-min",
];

const AMBIENT_KINDS: &[&str] = &["euclidean", "sphere", "hyperbolic", "flat-torus"];
const SHAPE_KINDS: &[&str] = &[
    "circle",
    "ellipse",
    "line-with-bump",
    "sphere",
    "clifford-torus",
    "great-circle",
    "graph-of-function",
];

pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let mut keys: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(ParseError { line, message: format!("expected `key = value`, got `{content}`") });
        };
        let key = k.trim().to_string();
        let value = v.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(ParseError { line, message: format!("unknown key `{key}`") });
        }
        if value.is_empty() {
            return Err(ParseError { line, message: format!("empty value for `{key}`") });
        }
        if keys.insert(key.clone(), value).is_some() {
            return Err(ParseError { line, message: format!("duplicate key `{key}`") });
        }
    }

    // Required blocks.
    for required in ["ambient.kind", "ambient.dim", "shape.kind"] {
        if !keys.contains_key(required) {
            return Err(ParseError { line: 0, message: format!("missing required key `{required}`") });
        }
    }

    // Defaults, echoed into the resolved scenario.
    let defaults: &[(&str, &str)] = &[
        ("flow.scheme", "explicit-euler"),
        ("flow.cfl", "0.1"),
        ("flow.gauge", "geometric"),
        ("monitors.record-every", "10"),
        ("monitors.coupled", "off"),
        ("monitors.metric-evolution", "off"),
        ("monitors.gradient", "off"),
        ("output.dir", "out"),
        ("seed", "0"),
    ];
    for (k, v) in defaults {
        keys.entry(k.to_string()).or_insert_with(|| v.to_string());
    }

    let scenario = Scenario { keys };
    scenario.validate().map_err(|message| ParseError { line: 0, message })?;
    Ok(scenario)
}

impl Scenario {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.keys.get(key).map(|s| s.as_str())
    }

    pub fn f64_key(&self, key: &str) -> Result<Option<f64>, String> {
        match self.keys.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| format!("key `{key}`: `{v}` is not a number")),
        }
    }

    pub fn usize_key(&self, key: &str) -> Result<Option<usize>, String> {
        match self.keys.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<usize>()
                .map(Some)
                .map_err(|_| format!("key `{key}`: `{v}` is not an integer")),
        }
    }

    pub fn bool_key(&self, key: &str) -> Result<bool, String> {
        match self.keys.get(key).map(|s| s.as_str()) {
            None | Some("off") | Some("false") => Ok(false),
            Some("on") | Some("true") => Ok(true),
            Some(v) => Err(format!("key `{key}`: expected on/off, got `{v}`")),
        }
    }

    fn validate(&self) -> Result<(), String> {
        let kind = self.get("ambient.kind").unwrap();
        if !AMBIENT_KINDS.contains(&kind) {
            return Err(format!("unknown ambient.kind `{kind}`"));
        }
        let dim = self
            .usize_key("ambient.dim")?
            .ok_or("missing ambient.dim".to_string())?;
        if !(2..=4).contains(&dim) {
            return Err(format!("ambient.dim = {dim} out of range 2..=4"));
        }
        match kind {
            "sphere" => {
                let r = self.f64_key("ambient.radius")?.ok_or("sphere ambient needs ambient.radius")?;
                if r <= 0.0 {
                    return Err("ambient.radius must be positive".into());
                }
            }
            "hyperbolic" => {
                let k = self
                    .f64_key("ambient.curvature")?
                    .ok_or("hyperbolic ambient needs ambient.curvature")?;
                if k <= 0.0 {
                    return Err("ambient.curvature must be positive".into());
                }
            }
            "flat-torus" => {
                let periods = self.get("ambient.periods").ok_or("flat-torus needs ambient.periods")?;
                let parts: Vec<&str> = periods.split(',').collect();
                if parts.len() != dim {
                    return Err(format!("ambient.periods needs {dim} entries"));
                }
                for p in parts {
                    let v: f64 = p.trim().parse().map_err(|_| "bad period value".to_string())?;
                    if v <= 0.0 {
                        return Err("periods must be positive".into());
                    }
                }
            }
            _ => {}
        }

        let shape = self.get("shape.kind").unwrap();
        if !SHAPE_KINDS.contains(&shape) {
            return Err(format!("unknown shape.kind `{shape}`"));
        }
        let compat = match shape {
            "circle" | "ellipse" | "line-with-bump" | "graph-of-function" => {
                (kind == "euclidean" || kind == "flat-torus") && dim == 2
            }
            "sphere" => kind == "euclidean" && dim == 3,
            "clifford-torus" => kind == "euclidean" && dim == 4,
            "great-circle" => kind == "sphere" && dim == 2,
            _ => false,
        };
        if !compat {
            return Err(format!(
                "shape `{shape}` is incompatible with ambient `{kind}` of dim {dim}"
            ));
        }

        if let Some(c) = self.f64_key("flow.cfl")? {
            if !(c > 0.0 && c <= 0.25) {
                return Err(format!("flow.cfl = {c} outside (0, 0.25]"));
            }
        }
        if let Some(t) = self.f64_key("flow.t-max")? {
            if t <= 0.0 {
                return Err("flow.t-max must be positive".into());
            }
        }
        match self.get("flow.scheme") {
            Some("explicit-euler") | Some("rk4-in-time") => {}
            Some(s) => return Err(format!("unknown flow.scheme `{s}`")),
            None => {}
        }
        match self.get("flow.gauge") {
            Some("geometric") | Some("deturck") => {}
            Some(s) => return Err(format!("unknown flow.gauge `{s}`")),
            None => {}
        }
        if let Some(kind) = self.get("audit.kind") {
            if !["pseudolocality", "persistence-thm75", "persistence-cor76", "density", "point-pick"]
                .contains(&kind)
            {
                return Err(format!("unknown audit.kind `{kind}`"));
            }
        }
        Ok(())
    }

    /// Derived scenarios for a sweep axis.
    pub fn with_override(&self, key: &str, value: &str) -> Result<Scenario, String> {
        if !KNOWN_KEYS.contains(&key) {
            return Err(format!("unknown sweep axis `{key}`"));
        }
        let mut keys = self.keys.clone();
        keys.insert(key.to_string(), value.to_string());
        let s = Scenario { keys };
        s.validate()?;
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
ambient.kind = euclidean
ambient.dim = 2
shape.kind = circle
shape.radius = 1
shape.nodes = 256
flow.t-max = 0.25
";

    #[test]
    fn minimal_scenario_gets_defaults() {
        let s = parse_scenario(MINIMAL).unwrap();
        assert_eq!(s.get("flow.cfl"), Some("0.1"));
        assert_eq!(s.get("flow.scheme"), Some("explicit-euler"));
        assert_eq!(s.get("seed"), Some("0"));
    }

    #[test]
    fn unknown_ambient_kind_rejected() {
        let text = MINIMAL.replace("euclidean", "klein-bottle");
        let err = parse_scenario(&text).unwrap_err();
        assert!(err.message.contains("unknown ambient.kind"), "{err}");
    }

    #[test]
    fn unknown_key_rejected_with_line() {
        let text = format!("{MINIMAL}shape.wobble = 3\n");
        let err = parse_scenario(&text).unwrap_err();
        assert_eq!(err.line, 7);
        assert!(err.message.contains("unknown key"));
    }

    #[test]
    fn invalid_cfl_rejected() {
        let text = format!("{MINIMAL}flow.cfl = 0.7\n");
        let err = parse_scenario(&text).unwrap_err();
        assert!(err.message.contains("outside"));
    }

    #[test]
    fn shape_ambient_compatibility() {
        let text = MINIMAL.replace("shape.kind = circle", "shape.kind = sphere");
        let err = parse_scenario(&text).unwrap_err();
        assert!(err.message.contains("incompatible"));
    }

    #[test]
    fn sweep_override_validates() {
        let s = parse_scenario(MINIMAL).unwrap();
        let d = s.with_override("flow.dt", "1e-4").unwrap();
        assert_eq!(d.get("flow.dt"), Some("1e-4"));
        assert!(s.with_override("flow.warp", "1").is_err());
    }
}
