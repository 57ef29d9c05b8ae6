//! JSON schemas shipped in `docs/`.

pub const SCHEMAS: &[(&str, &str)] = &[
    ("chambers", include_str!("../../../docs/chambers.schema.json")),
    ("curve", include_str!("../../../docs/curve.schema.json")),
    ("error", include_str!("../../../docs/error.schema.json")),
    ("group", include_str!("../../../docs/group.schema.json")),
    ("input", include_str!("../../../docs/input.schema.json")),
    ("monodromy", include_str!("../../../docs/monodromy.schema.json")),
    ("record", include_str!("../../../docs/record.schema.json")),
    ("stability", include_str!("../../../docs/stability.schema.json")),
];

pub fn lookup(name: &str) -> Option<&'static str> {
    SCHEMAS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}
