//! Named example digraphs, matrices and checked-in certificates.

use thiserror::Error;

use crate::certificate::{parse_script, MoveScript};
use crate::digraph::Digraph;
use crate::matrix::RelatorMatrix;

const GOLDEN_TO_ROSE2: &str = include_str!("../data/golden-to-rose2.script");
const ROSE2_TO_FOURCYCLE: &str = include_str!("../data/rose2-to-fourcycle.script");
const ASHLEY_TO_FOURCYCLE: &str = include_str!("../data/ashley-to-fourcycle.script");

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Builtin {
    Digraph(Digraph),
    Relator(RelatorMatrix),
    Script(MoveScript),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown builtin `{0}`")]
pub struct UnknownBuiltin(pub String);

pub const BUILTIN_NAMES: &[&str] = &[
    "rose <n>",
    "golden",
    "ashley",
    "fourcycle",
    "script:golden-to-rose2",
    "script:ashley-to-fourcycle",
    "script:rose2-to-fourcycle",
];

/// The relator of the four-cycle with a loop at every vertex.
pub fn fourcycle() -> RelatorMatrix {
    RelatorMatrix::from_rows(&[[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0]]).unwrap()
}

/// Accepts `rose N`, `roseN`, `golden`, `ashley`, `fourcycle` and the
/// `script:` names in [`BUILTIN_NAMES`].
pub fn builtin(name: &str) -> Result<Builtin, UnknownBuiltin> {
    let unknown = || UnknownBuiltin(name.to_string());
    let key = name.trim();
    if let Some(rest) = key.strip_prefix("rose") {
        let n: usize = rest.trim().parse().map_err(|_| unknown())?;
        if n < 2 {
            return Err(unknown());
        }
        return Ok(Builtin::Digraph(Digraph::rose(n)));
    }
    let script = |text: &str| Builtin::Script(parse_script(text).expect("checked-in script parses"));
    Ok(match key {
        "golden" => Builtin::Digraph(Digraph::golden_mean()),
        "ashley" => Builtin::Digraph(Digraph::ashley()),
        "fourcycle" => Builtin::Relator(fourcycle()),
        "script:golden-to-rose2" => script(GOLDEN_TO_ROSE2),
        "script:rose2-to-fourcycle" => script(ROSE2_TO_FOURCYCLE),
        "script:ashley-to-fourcycle" => script(ASHLEY_TO_FOURCYCLE),
        _ => return Err(unknown()),
    })
}

pub fn builtin_script(name: &str) -> Result<MoveScript, UnknownBuiltin> {
    match builtin(name)? {
        Builtin::Script(s) => Ok(s),
        _ => Err(UnknownBuiltin(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::verify_script;

    #[test]
    fn named_objects() {
        assert_eq!(builtin("rose 3").unwrap(), Builtin::Digraph(Digraph::rose(3)));
        match builtin("rose3").unwrap() {
            Builtin::Digraph(d) => assert_eq!(d.relator_matrix(), RelatorMatrix::from_rows(&[[2]]).unwrap()),
            other => panic!("{other:?}"),
        }
        assert!(builtin("rose 1").is_err());
        assert!(builtin("petersen").is_err());
        assert_eq!(builtin("fourcycle").unwrap(), Builtin::Relator(fourcycle()));
    }

    #[test]
    fn checked_in_scripts_verify() {
        for name in ["script:golden-to-rose2", "script:rose2-to-fourcycle", "script:ashley-to-fourcycle"] {
            let s = builtin_script(name).unwrap();
            let r = verify_script(&s);
            assert!(r.is_verified(), "{name}: {:?}", r.status);
        }
    }

    #[test]
    fn script_endpoints() {
        let a = builtin_script("script:ashley-to-fourcycle").unwrap();
        assert_eq!(a.initial, Digraph::ashley().relator_matrix());
        assert_eq!(a.claimed_final, fourcycle());
        let r = builtin_script("script:rose2-to-fourcycle").unwrap();
        assert_eq!(r.initial, Digraph::rose(2).relator_matrix());
        assert_eq!(r.claimed_final, fourcycle());
    }
}
