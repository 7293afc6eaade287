//! JSON output with reals printed to 17 significant digits, and the tree
//! document format.
//!
//! ```text
//! {"m": 2, "classes": ["A", "B"], "root": node}
//! node = {"type": "leaf", "class": 0}
//!      | {"type": "split", "coefficients": [..], "bias": b, "left": node, "right": node}
//! ```

use std::io;

use cart_elc_core::{Hyperplane, Node, Tree};
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

/// Writes every `f64` with 17 significant digits: positional for decimal
/// exponents in `-5..=16`, scientific otherwise.
pub struct RealFormatter {
    inner: PrettyFormatter<'static>,
}

impl RealFormatter {
    pub fn new() -> Self {
        Self {
            inner: PrettyFormatter::with_indent(b"  "),
        }
    }
}

impl Default for RealFormatter {
    fn default() -> Self {
        Self::new()
    }
}

/// `value` with 17 significant digits.
pub fn format_real(value: f64) -> String {
    if !value.is_finite() {
        return "null".to_string();
    }
    let sci = format!("{:.16e}", value);
    let (mantissa, exponent) = sci.split_once('e').expect("scientific format");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    if !(-5..=16).contains(&exponent) {
        return format!("{sign}{mantissa}e{exponent}");
    }
    if exponent < 0 {
        let zeros = "0".repeat((-exponent - 1) as usize);
        format!("{sign}0.{zeros}{digits}")
    } else {
        let point = exponent as usize + 1;
        if point >= digits.len() {
            format!("{sign}{digits}.0")
        } else {
            format!("{sign}{}.{}", &digits[..point], &digits[point..])
        }
    }
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.inner.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl Formatter for RealFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_real(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        end_object_key();
        begin_object_value();
        end_object_value();
    }
}

/// Pretty-printed JSON followed by a newline.
pub fn to_bytes<T: Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, RealFormatter::new());
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    out.push(b'\n');
    out
}

fn node_value(node: &Node) -> Value {
    match node {
        Node::Leaf { class } => json!({"type": "leaf", "class": class}),
        Node::Split { plane, left, right } => json!({
            "type": "split",
            "coefficients": plane.coefficients(),
            "bias": plane.bias(),
            "left": node_value(left),
            "right": node_value(right),
        }),
    }
}

/// The tree document as a JSON value.
pub fn tree_value(tree: &Tree) -> Value {
    json!({"m": tree.m, "classes": tree.classes, "root": node_value(&tree.root)})
}

/// Serialized tree document.
pub fn tree_to_bytes(tree: &Tree) -> Vec<u8> {
    to_bytes(&tree_value(tree))
}

/// Schema violation, located by a JSON path such as `$.root.left.bias`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl std::fmt::Display for SchemaError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn fail<T>(path: &str, message: impl Into<String>) -> Result<T, SchemaError> {
    Err(SchemaError {
        path: path.to_string(),
        message: message.into(),
    })
}

fn field<'a>(object: &'a Value, path: &str, key: &str) -> Result<&'a Value, SchemaError> {
    match object.get(key) {
        Some(v) => Ok(v),
        None => fail(path, format!("missing field {key:?}")),
    }
}

fn as_index(value: &Value, path: &str) -> Result<usize, SchemaError> {
    match value.as_u64() {
        Some(v) => Ok(v as usize),
        None => fail(path, "expected a non-negative integer"),
    }
}

fn as_real(value: &Value, path: &str) -> Result<f64, SchemaError> {
    match value.as_f64() {
        Some(v) => Ok(v),
        None => fail(path, "expected a number"),
    }
}

fn parse_node(value: &Value, path: &str, m: usize, classes: usize) -> Result<Node, SchemaError> {
    if !value.is_object() {
        return fail(path, "expected an object");
    }
    let kind = field(value, path, "type")?;
    match kind.as_str() {
        Some("leaf") => {
            let class_path = format!("{path}.class");
            let class = as_index(field(value, path, "class")?, &class_path)?;
            if class >= classes {
                return fail(&class_path, format!("class {class} out of range for {classes} classes"));
            }
            Ok(Node::Leaf { class })
        }
        Some("split") => {
            let coef_path = format!("{path}.coefficients");
            let Some(raw) = field(value, path, "coefficients")?.as_array() else {
                return fail(&coef_path, "expected an array");
            };
            if raw.len() != m {
                return fail(&coef_path, format!("expected {m} coefficients, found {}", raw.len()));
            }
            let coefficients = raw
                .iter()
                .enumerate()
                .map(|(i, v)| as_real(v, &format!("{coef_path}[{i}]")))
                .collect::<Result<Vec<f64>, _>>()?;
            let bias = as_real(field(value, path, "bias")?, &format!("{path}.bias"))?;
            let plane = match Hyperplane::new(coefficients.clone(), bias) {
                Ok(p) => p,
                Err(e) => return fail(&coef_path, e.to_string()),
            };
            if plane.coefficients() != coefficients.as_slice() {
                return fail(&coef_path, "first non-zero coefficient must be positive");
            }
            let left = parse_node(field(value, path, "left")?, &format!("{path}.left"), m, classes)?;
            let right = parse_node(field(value, path, "right")?, &format!("{path}.right"), m, classes)?;
            Ok(Node::Split {
                plane,
                left: Box::new(left),
                right: Box::new(right),
            })
        }
        _ => fail(&format!("{path}.type"), "expected \"leaf\" or \"split\""),
    }
}

/// Parses a tree document.
pub fn tree_from_slice(bytes: &[u8]) -> Result<Tree, SchemaError> {
    let value: Value = match serde_json::from_slice(bytes) {
        Ok(v) => v,
        Err(e) => return fail("$", e.to_string()),
    };
    if !value.is_object() {
        return fail("$", "expected an object");
    }
    let m = as_index(field(&value, "$", "m")?, "$.m")?;
    if m == 0 {
        return fail("$.m", "expected at least one feature");
    }
    let Some(raw_classes) = field(&value, "$", "classes")?.as_array() else {
        return fail("$.classes", "expected an array");
    };
    let classes = raw_classes
        .iter()
        .enumerate()
        .map(|(i, c)| match c.as_str() {
            Some(s) => Ok(s.to_string()),
            None => fail(&format!("$.classes[{i}]"), "expected a string"),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let root = parse_node(field(&value, "$", "root")?, "$.root", m, classes.len())?;
    Ok(Tree { m, classes, root })
}
