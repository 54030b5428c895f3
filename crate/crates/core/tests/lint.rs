//! Source-level checks: the oracles stay independent of the round-charging
//! machinery, and the algorithm modules stay free of shared mutable state.

use std::fs;
use std::path::Path;

fn src(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("src").join(name);
    fs::read_to_string(&path).unwrap_or_else(|e| panic!("read {path:?}: {e}"))
}

#[test]
fn oracles_are_ledger_free() {
    let text = src("oracles.rs");
    for needle in ["RoundLedger", "mpc::", "PrimitiveKind", "charge("] {
        assert!(
            !text.contains(needle),
            "oracles.rs references the charged machinery via {needle:?}"
        );
    }
}

#[test]
fn algorithm_modules_avoid_shared_mutability() {
    for name in [
        "conn2.rs",
        "dfs.rs",
        "forest.rs",
        "graph.rs",
        "mpc.rs",
        "rmq.rs",
        "sf.rs",
        "tree.rs",
    ] {
        let text = src(name);
        for needle in ["static mut", "RefCell", "Mutex", "AtomicU", "unsafe"] {
            assert!(
                !text.contains(needle),
                "{name} uses {needle:?}; algorithm state must flow through arguments"
            );
        }
    }
}
