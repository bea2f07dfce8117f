use std::path::PathBuf;

use fortress_core::generate::{random_fortress, GenOptions};
use fortress_core::{parse, serialize, validate_text, Action, ErrorCode, SeedSpec, SplitMix64};
use proptest::prelude::*;

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.fort"));
    std::fs::read_to_string(path).unwrap()
}

fn codes(text: &str) -> Vec<(ErrorCode, usize)> {
    validate_text(text)
        .into_iter()
        .map(|e| (e.code, e.line))
        .collect()
}

const MINIMAL: &str = r#"FORTRESS "Tiny"
SEED 3

ENTITY a "Ant"
  NODE 0 idle
END

MAP
################
#..............#
#....a.........#
#..............#
#..............#
#..............#
#..............#
################
END
"#;

#[test]
fn golden_error_catalog() {
    use ErrorCode::*;
    let e012: Vec<(ErrorCode, usize)> = std::iter::once((TooManyInitialEntities, 10))
        .chain((12..=17).map(|l| (MapDimensionMismatch, l)))
        .collect();
    let cases: Vec<(&str, Vec<(ErrorCode, usize)>)> = vec![
        ("E001", vec![(UnknownAction, 6)]),
        ("E002", vec![(UnknownCondition, 7)]),
        ("E003", vec![(DuplicateActionSignature, 6)]),
        ("E004", vec![(UndefinedTargetCharacter, 6)]),
        ("E005", vec![(BadNodeIndex, 6)]),
        ("E006", vec![(DuplicateDirectedEdge, 8)]),
        ("E007", vec![(MapDimensionMismatch, 13)]),
        ("E008", vec![(UnknownMapCharacter, 13)]),
        ("E009", vec![(BadBorder, 13)]),
        ("E010", vec![(BadCount, 7)]),
        ("E011", vec![(ReservedCharacter, 6)]),
        ("E012", e012),
        ("E013", vec![(SyntaxError, 3)]),
        ("E014", vec![(DuplicateEntityCharacter, 9)]),
        ("E015", vec![(MissingSection, 18)]),
    ];
    assert_eq!(cases.len(), ErrorCode::ALL.len());
    for (name, mut expected) in cases {
        assert_eq!(ErrorCode::from_code(name).unwrap().code(), name);
        let mut got = codes(&golden(name));
        got.sort();
        expected.sort();
        assert_eq!(got, expected, "{name}");
    }
}

#[test]
fn minimal_text_parses() {
    let f = parse(MINIMAL).unwrap();
    assert_eq!(f.classes.len(), 1);
    assert_eq!(f.instances.len(), 1);
    assert_eq!(f.instances[0].pos, fortress_core::Pos::new(5, 2));
    assert_eq!(f.seed_spec, SeedSpec::Fixed(3));
    assert_eq!(f.name, "Tiny");
    assert!(validate_text(MINIMAL).is_empty());
}

#[test]
fn undefined_target_reported_on_its_line() {
    let text = MINIMAL.replace("  NODE 0 idle", "  NODE 0 push $");
    assert_eq!(codes(&text), vec![(ErrorCode::UndefinedTargetCharacter, 5)]);
}

#[test]
fn short_map_row() {
    let text = MINIMAL.replace("#....a.........#", "#....a........#");
    assert_eq!(codes(&text), vec![(ErrorCode::MapDimensionMismatch, 11)]);
}

#[test]
fn zero_step_count() {
    let text = MINIMAL.replace(
        "  NODE 0 idle",
        "  NODE 0 idle\n  NODE 1 move\n  EDGE 0-1 step 0",
    );
    assert_eq!(codes(&text), vec![(ErrorCode::BadCount, 7)]);
    let text = MINIMAL.replace("  NODE 0 idle", "  NODE 0 idle\n  EDGE 0-0 within a");
    assert_eq!(codes(&text), vec![(ErrorCode::BadCount, 6)]);
}

#[test]
fn duplicate_entity_block() {
    let text = MINIMAL.replace("MAP\n", "ENTITY a \"Other\"\n  NODE 0 move\nEND\n\nMAP\n");
    assert_eq!(codes(&text), vec![(ErrorCode::DuplicateEntityCharacter, 8)]);
}

#[test]
fn names_with_escapes_and_odd_entity_chars() {
    let text = MINIMAL
        .replace("\"Tiny\"", r#""say \"hi\" \\ bye""#)
        .replace("ENTITY a \"Ant\"", "ENTITY \" \"Quote\"")
        .replace("#....a.........#", "#....\".........#");
    let f = parse(&text).unwrap();
    assert_eq!(f.name, r#"say "hi" \ bye"#);
    assert!(f.classes.contains_key(&'"'));
    assert_eq!(parse(&serialize(&f)).unwrap(), f);

    let bad = MINIMAL.replace("\"Tiny\"", r#""tab \t""#);
    assert_eq!(codes(&bad), vec![(ErrorCode::SyntaxError, 1)]);
}

#[test]
fn unclosed_entity_block() {
    let text = MINIMAL.replace("END\n\nMAP", "\nMAP");
    let got = codes(&text);
    assert_eq!(got, vec![(ErrorCode::SyntaxError, 4)]);
}

#[test]
fn empty_input_reports_missing_sections_on_line_one() {
    let got = codes("");
    assert_eq!(got.len(), 4);
    assert!(got
        .iter()
        .all(|&(c, l)| c == ErrorCode::MissingSection && l == 1));
}

#[test]
fn independent_defects_are_all_reported() {
    // Five separate problems on five lines.
    let text = r#"FORTRESS "Broken"
SEED 3
ENTITY a "Ant"
  NODE 0 idle
  NODE 1 jump
  EDGE 0-0 maybe
  NODE 2 take Z
END
MAP
################
#....a.........#
#..............#
#..............#
#.....?........#
#..............#
#..............
################
END
"#;
    let got = codes(text);
    assert!(got.len() >= 5, "{got:?}");
    for expected in [
        (ErrorCode::UnknownAction, 5),
        (ErrorCode::UnknownCondition, 6),
        (ErrorCode::UndefinedTargetCharacter, 7),
        (ErrorCode::UnknownMapCharacter, 14),
        (ErrorCode::MapDimensionMismatch, 16),
    ] {
        assert!(got.contains(&expected), "missing {expected:?} in {got:?}");
    }
}

#[test]
fn entity_order_is_canonical() {
    let text = MINIMAL.replace(
        "MAP\n",
        "ENTITY Z \"Zed\"\n  NODE 0 idle\nEND\nENTITY B \"Bee\"\n  NODE 0 idle\nEND\n\nMAP\n",
    );
    let out = serialize(&parse(&text).unwrap());
    let order: Vec<&str> = out.lines().filter(|l| l.starts_with("ENTITY")).collect();
    assert_eq!(
        order,
        ["ENTITY B \"Bee\"", "ENTITY Z \"Zed\"", "ENTITY a \"Ant\""]
    );
}

#[test]
fn edges_are_sorted_on_parse() {
    let text = MINIMAL.replace(
        "  NODE 0 idle",
        "  NODE 1 move\n  NODE 0 idle\n  EDGE 1-0 none\n  EDGE 0-1 step 2",
    );
    let f = parse(&text).unwrap();
    let a = &f.classes[&'a'];
    assert_eq!(a.nodes[0].action, Action::Idle);
    assert_eq!((a.edges[0].from, a.edges[0].to), (0, 1));
}

#[test]
fn serialize_parse_fixpoint_on_samples() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fortresses");
    for entry in std::fs::read_dir(dir).unwrap() {
        let text = std::fs::read_to_string(entry.unwrap().path()).unwrap();
        let once = serialize(&parse(&text).unwrap());
        let twice = serialize(&parse(&once).unwrap());
        assert_eq!(once, twice);
    }
}

#[test]
fn random_round_trip_500() {
    let mut rng = SplitMix64::new(0x5eed);
    for i in 0..500 {
        let f = random_fortress(&mut rng, GenOptions::default());
        let text = serialize(&f);
        let back = parse(&text).unwrap_or_else(|e| panic!("case {i}: {e:?}\n{text}"));
        assert_eq!(back, f, "case {i}\n{text}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parse_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..400)) {
        let text = String::from_utf8_lossy(&bytes);
        let _ = validate_text(&text);
    }

    #[test]
    fn mutated_valid_text_never_panics(seed in any::<u64>(), edits in 1usize..8) {
        let mut rng = SplitMix64::new(seed);
        let mut bytes = serialize(&random_fortress(&mut rng, GenOptions::default())).into_bytes();
        for _ in 0..edits {
            let i = rng.below(bytes.len());
            bytes[i] = b" \n#.-0aZ$\"\\ENDMAPNODE"[rng.below(20)];
        }
        let text = String::from_utf8_lossy(&bytes);
        for e in validate_text(&text) {
            prop_assert!(e.line >= 1 && e.line <= text.lines().count().max(1));
        }
    }
}
