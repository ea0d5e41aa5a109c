//! Machine-readable parameter schemas and total argument validation.

use serde::Serialize;
use serde_json::{json, Map, Value};

use super::ToolError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamType {
    String,
    Number,
    Integer,
    Boolean,
    /// Three finite numbers.
    Vec3,
    StringList,
    IntegerList,
    Object,
}

impl ParamType {
    pub fn name(self) -> &'static str {
        match self {
            ParamType::String => "string",
            ParamType::Number => "number",
            ParamType::Integer => "integer",
            ParamType::Boolean => "boolean",
            ParamType::Vec3 => "vec3",
            ParamType::StringList => "string_list",
            ParamType::IntegerList => "integer_list",
            ParamType::Object => "object",
        }
    }

    fn json_schema(self) -> Value {
        match self {
            ParamType::String => json!({"type": "string"}),
            ParamType::Number => json!({"type": "number"}),
            ParamType::Integer => json!({"type": "integer"}),
            ParamType::Boolean => json!({"type": "boolean"}),
            ParamType::Vec3 => json!({"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}),
            ParamType::StringList => json!({"type": "array", "items": {"type": "string"}}),
            ParamType::IntegerList => json!({"type": "array", "items": {"type": "integer"}}),
            ParamType::Object => json!({"type": "object"}),
        }
    }

    fn accepts(self, value: &Value) -> bool {
        match self {
            ParamType::String => value.is_string(),
            ParamType::Number => value.is_number(),
            ParamType::Integer => value.is_i64() || value.is_u64(),
            ParamType::Boolean => value.is_boolean(),
            ParamType::Vec3 => value.as_array().is_some_and(|a| a.len() == 3 && a.iter().all(Value::is_number)),
            ParamType::StringList => value.as_array().is_some_and(|a| a.iter().all(Value::is_string)),
            ParamType::IntegerList => value.as_array().is_some_and(|a| a.iter().all(|v| v.is_i64() || v.is_u64())),
            ParamType::Object => value.is_object(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    #[serde(rename = "type")]
    pub ty: ParamType,
    pub required: bool,
    /// `None` on an optional parameter means "absent unless given".
    pub default: Option<Value>,
    #[serde(rename = "enum", skip_serializing_if = "Option::is_none")]
    pub enum_domain: Option<Vec<&'static str>>,
    pub description: &'static str,
}

impl ParamSpec {
    pub fn required(name: &'static str, ty: ParamType, description: &'static str) -> Self {
        Self {
            name,
            ty,
            required: true,
            default: None,
            enum_domain: None,
            description,
        }
    }

    pub fn optional(name: &'static str, ty: ParamType, default: Option<Value>, description: &'static str) -> Self {
        Self {
            name,
            ty,
            required: false,
            default,
            enum_domain: None,
            description,
        }
    }

    pub fn one_of(mut self, domain: &[&'static str]) -> Self {
        self.enum_domain = Some(domain.to_vec());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolSchema {
    pub name: &'static str,
    pub description: &'static str,
    pub parameters: Vec<ParamSpec>,
    /// Whether a successful call changes toolkit state.
    pub mutation: bool,
}

impl ToolSchema {
    /// JSON Schema object describing the arguments.
    pub fn input_schema(&self) -> Value {
        let mut properties = Map::new();
        for p in &self.parameters {
            let mut prop = p.ty.json_schema();
            let obj = prop.as_object_mut().expect("schema is an object");
            obj.insert("description".into(), json!(p.description));
            if let Some(d) = &p.default {
                obj.insert("default".into(), d.clone());
            }
            if let Some(domain) = &p.enum_domain {
                obj.insert("enum".into(), json!(domain));
            }
            properties.insert(p.name.to_string(), prop);
        }
        let required: Vec<&str> = self.parameters.iter().filter(|p| p.required).map(|p| p.name).collect();
        json!({
            "type": "object",
            "properties": properties,
            "required": required,
            "additionalProperties": false,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "description": self.description,
            "mutation": self.mutation,
            "parameters": serde_json::to_value(&self.parameters).expect("params serialize"),
            "inputSchema": self.input_schema(),
        })
    }

    /// Check `args` against the schema and fill in defaults. `null` is
    /// treated as an empty argument object; an explicit `null` on an
    /// optional parameter means "not given".
    pub fn validate(&self, args: &Value) -> Result<Args, ToolError> {
        let violation = |field: &str, reason: String| ToolError::SchemaViolation {
            tool: self.name.to_string(),
            field: field.to_string(),
            reason,
        };
        let given = match args {
            Value::Null => Map::new(),
            Value::Object(m) => m.clone(),
            other => return Err(violation("<arguments>", format!("expected an object, got {}", kind_of(other)))),
        };
        if let Some(unknown) = given.keys().find(|k| !self.parameters.iter().any(|p| p.name == k.as_str())) {
            let known: Vec<&str> = self.parameters.iter().map(|p| p.name).collect();
            return Err(violation(unknown, format!("unknown parameter; accepted: [{}]", known.join(", "))));
        }
        let mut out = Map::new();
        for p in &self.parameters {
            match given.get(p.name) {
                None | Some(Value::Null) if p.required => {
                    return Err(violation(p.name, "required parameter is missing".into()));
                }
                None | Some(Value::Null) => {
                    if let Some(d) = &p.default {
                        out.insert(p.name.to_string(), d.clone());
                    }
                }
                Some(v) => {
                    if !p.ty.accepts(v) {
                        return Err(violation(p.name, format!("expected {}, got {}", p.ty.name(), kind_of(v))));
                    }
                    if let (Some(domain), Some(s)) = (&p.enum_domain, v.as_str()) {
                        if !domain.contains(&s) {
                            return Err(violation(p.name, format!("'{s}' is not one of [{}]", domain.join(", "))));
                        }
                    }
                    out.insert(p.name.to_string(), v.clone());
                }
            }
        }
        Ok(Args {
            tool: self.name,
            values: out,
        })
    }
}

fn kind_of(v: &Value) -> &'static str {
    match v {
        Value::Null => "null",
        Value::Bool(_) => "boolean",
        Value::Number(_) => "number",
        Value::String(_) => "string",
        Value::Array(_) => "array",
        Value::Object(_) => "object",
    }
}

/// Validated arguments. Accessors only fail on programming errors in a
/// tool handler (asking for a parameter the schema does not declare).
#[derive(Debug, Clone, PartialEq)]
pub struct Args {
    tool: &'static str,
    values: Map<String, Value>,
}

impl Args {
    fn missing(&self, name: &str) -> ToolError {
        ToolError::SchemaViolation {
            tool: self.tool.to_string(),
            field: name.to_string(),
            reason: "required parameter is missing".into(),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Value> {
        self.values.get(name)
    }

    pub fn str(&self, name: &str) -> Result<&str, ToolError> {
        self.values.get(name).and_then(Value::as_str).ok_or_else(|| self.missing(name))
    }

    pub fn opt_str(&self, name: &str) -> Option<&str> {
        self.values.get(name).and_then(Value::as_str)
    }

    pub fn f64(&self, name: &str) -> Result<f64, ToolError> {
        self.values.get(name).and_then(Value::as_f64).ok_or_else(|| self.missing(name))
    }

    pub fn vec3(&self, name: &str) -> Result<[f64; 3], ToolError> {
        let arr = self.values.get(name).and_then(Value::as_array).ok_or_else(|| self.missing(name))?;
        let mut out = [0.0; 3];
        for (slot, v) in out.iter_mut().zip(arr) {
            *slot = v.as_f64().ok_or_else(|| self.missing(name))?;
        }
        Ok(out)
    }

    pub fn strings(&self, name: &str) -> Result<Vec<String>, ToolError> {
        let arr = self.values.get(name).and_then(Value::as_array).ok_or_else(|| self.missing(name))?;
        Ok(arr.iter().filter_map(Value::as_str).map(str::to_string).collect())
    }

    pub fn integers(&self, name: &str) -> Result<Vec<i64>, ToolError> {
        let arr = self.values.get(name).and_then(Value::as_array).ok_or_else(|| self.missing(name))?;
        Ok(arr.iter().filter_map(Value::as_i64).collect())
    }

    pub fn object(&self, name: &str) -> Option<&Map<String, Value>> {
        self.values.get(name).and_then(Value::as_object)
    }
}
