use std::path::Path;

use qlab_core::format::{self, bundled_files, normalize, render, Loader};

#[test]
fn bundled_files_parse_and_render_back() {
    assert!(!bundled_files().is_empty());
    for (file, text) in bundled_files() {
        let inst = format::bundled(file).unwrap_or_else(|e| panic!("{file}: {e}"));
        assert_eq!(inst.kind().extension(), file.rsplit('.').next().unwrap(), "{file}");
        assert_eq!(normalize(&render(&inst)), normalize(text), "{file}");
    }
}

#[test]
fn rendered_text_reparses_to_equal_value() {
    for (file, _) in bundled_files() {
        let inst = format::bundled(file).unwrap();
        let again = Loader::bundled().parse(&render(&inst)).unwrap();
        assert_eq!(render(&again), render(&inst), "{file}");
    }
}

#[test]
fn counterexamples_fail_with_declared_kind() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../counterexamples");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let expect = text
            .lines()
            .find_map(|l| l.strip_prefix("# expect:"))
            .unwrap_or_else(|| panic!("{} lacks an expect line", path.display()))
            .trim()
            .to_string();
        match Loader::load_path(&path) {
            Ok(_) => panic!("{} loaded but should fail with {expect}", path.display()),
            Err(e) => assert_eq!(e.kind(), expect, "{}: {e}", path.display()),
        }
        seen += 1;
    }
    assert!(seen >= 8);
}
