//! Regenerates the checked-in certificate scripts under `data/`.
//!
//! Both reductions end at the one-by-one matrix `[1]`; the scripts into the
//! four-cycle relator are obtained by running the four-cycle reduction
//! backwards.

use std::path::Path;

use udaf::builtin::fourcycle;
use udaf::moves::{apply_moves, invert_moves, Move};
use udaf::{serialize_script, verify_script, Digraph, MoveScript, RelatorMatrix};

const ASHLEY_TO_ROSE2: &str = "
addrow 2 3
addrow 5 3
deldead 3
addrow 2 3
addrow 4 3
addrow 6 3
deldead 3
addrow 3 4
addrow 6 4
deldead 4
addrow 2 4
addrow 3 4
addrow 3 4
addrow 5 4
deldead 4
subcol 3 4
subcol 4 3
subcol 4 3
addrow 4 3
addcol 1 2
subrow 4 2
addrow 4 3
subrow 4 2
subrow 4 2
subcol 1 2
addcol 3 4
addrow 4 3
addcol 3 4
deldead 3
addcol 1 2
subrow 3 2
subrow 3 2
subrow 3 2
subrow 3 2
subcol 3 2
subcol 1 2
addrow 1 2
deldead 2
subrow 1 2
addcol 1 2
deldead 1
";

const FOURCYCLE_TO_ROSE2: &str = "
addrow 1 2
addcol 1 3
subrow 1 2
subcol 4 3
addrow 2 3
addcol 3 4
deldead 3
addcol 1 2
subrow 3 2
subcol 3 2
subcol 1 2
addrow 1 2
deldead 2
subrow 1 2
addcol 1 2
deldead 1
";

fn parse(list: &str) -> Vec<Move> {
    list.lines().filter(|l| !l.trim().is_empty()).map(|l| l.parse().unwrap()).collect()
}

fn main() {
    let rose2 = RelatorMatrix::from_rows(&[[1]]).unwrap();
    let ashley = Digraph::ashley().relator_matrix();
    let four = fourcycle();

    let ashley_moves = parse(ASHLEY_TO_ROSE2);
    let (end, ashley_applied) = apply_moves(&ashley, &ashley_moves).expect("ashley reduction replays");
    assert_eq!(end, rose2);

    let four_moves = parse(FOURCYCLE_TO_ROSE2);
    let (end, _) = apply_moves(&four, &four_moves).expect("four-cycle reduction replays");
    assert_eq!(end, rose2);
    let rose2_to_four = invert_moves(&four, &four_moves).unwrap();

    let forward = MoveScript { initial: rose2.clone(), moves: rose2_to_four.clone(), claimed_final: four.clone() };
    let mut moves = ashley_applied;
    moves.extend(rose2_to_four);
    let ashley_script = MoveScript { initial: ashley, moves, claimed_final: four };

    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for (file, header, script) in [
        ("rose2-to-fourcycle.script", "# full 2-shift to the four-cycle relator\n", &forward),
        ("ashley-to-fourcycle.script", "# Ashley's eight-vertex digraph to the four-cycle relator,\n# passing through the full 2-shift\n", &ashley_script),
    ] {
        assert!(verify_script(script).is_verified(), "{file}");
        let text = format!("{header}{}", serialize_script(script));
        std::fs::write(data.join(file), text).unwrap();
        println!("{file}: {} moves", script.moves.len());
    }
}
