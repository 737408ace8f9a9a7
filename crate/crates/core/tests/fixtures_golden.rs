//! The committed fixture set must be exactly what the generator produces at
//! the default seed, so `fixtures generate` and the repository never drift.

use aquaclean_core::pipeline::fixtures::write_fixtures;
use std::path::Path;

#[test]
fn committed_fixtures_match_generator_output() {
    let repo_fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    assert!(
        repo_fixtures.is_dir(),
        "missing fixtures/ at the workspace root"
    );

    let tmp = tempfile::tempdir().unwrap();
    let paths = write_fixtures(tmp.path(), 7).unwrap();
    assert_eq!(paths.len(), 10);

    for generated in paths {
        let name = generated.file_name().unwrap();
        let committed = repo_fixtures.join(name);
        let a = std::fs::read(&generated).unwrap();
        let b = std::fs::read(&committed)
            .unwrap_or_else(|e| panic!("missing committed fixture {committed:?}: {e}"));
        assert!(
            a == b,
            "{name:?} differs from the committed copy; regenerate with `aquaclean fixtures generate -o fixtures`"
        );
    }
}
