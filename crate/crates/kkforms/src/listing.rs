//! Plain-text rendering of the catalog manifest.

use std::fmt::Write as _;

use kkforms_core::catalog::{manifest, ParamKind};

/// One block per family: a header row with identifier, rank, nullity,
/// extra-coordinate signature and citation, then its parameters.
pub fn render() -> String {
    let mut s = String::new();
    for e in manifest() {
        let _ = writeln!(
            s,
            "{}\trank={}\tnullity={}\teps_d={}\t[{}]",
            e.family.id(),
            e.rank,
            e.nullity,
            e.eps_d,
            e.citation
        );
        let _ = writeln!(s, "    {}", e.title);
        for p in e.params {
            let kind = match p.kind {
                ParamKind::Real => "real",
                ParamKind::Integer => "integer",
                ParamKind::Sign => "sign",
                ParamKind::Flag => "flag",
            };
            let default = match p.default {
                Some(v) => format!("default {v}"),
                None => "required".into(),
            };
            let _ = writeln!(s, "    {:<10} {:<8} {:<26} {:<12} {}", p.name, kind, p.range, default, p.doc);
        }
    }
    s
}
