//! Random valid scripts, checked against the oracle with every structural
//! check after every op.

use std::fmt::Write as _;

use hollow_heap::verify::{differential_run, ExecConfig, Verify};
use hollow_heap::workload::Workload;
use hollow_heap::{RebuildConfig, RebuildMethod, RebuildTrigger, VariantConfig};
use proptest::prelude::*;

/// Turns raw choices into a script that only makes valid requests: heap
/// `h` is the main heap, `t` collects a few inserts and is melded into it.
/// Keys are distinct, so the item each deletemin removes is known.
fn script(choices: &[(u8, u32, i64)]) -> String {
    let mut s = String::from("makeheap h\nmakeheap t\n");
    let mut serial = 0i64;
    let mut unique = |base: i64| {
        serial += 1;
        (base << 20) + serial
    };
    let mut live: Vec<(u32, i64)> = Vec::new();
    let mut side: Vec<(u32, i64)> = Vec::new();
    let mut next = 0u32;
    for &(kind, pick, key) in choices {
        match kind {
            0 | 1 => {
                let key = unique(key);
                let _ = writeln!(s, "insert h x{next} {key}");
                live.push((next, key));
                next += 1;
            }
            2 if !live.is_empty() => {
                let i = pick as usize % live.len();
                let k = unique((live[i].1 >> 20) - 1 - key.rem_euclid(50));
                let _ = writeln!(s, "decrease h x{} {k}", live[i].0);
                live[i].1 = k;
            }
            3 if !live.is_empty() => {
                let _ = writeln!(s, "deletemin h");
                let i = (0..live.len()).min_by_key(|&i| live[i].1).unwrap();
                live.swap_remove(i);
            }
            4 if !live.is_empty() => {
                let i = pick as usize % live.len();
                let (it, _) = live.swap_remove(i);
                let _ = writeln!(s, "delete h x{it}");
            }
            5 => {
                let key = unique(key);
                let _ = writeln!(s, "insert t x{next} {key}");
                side.push((next, key));
                next += 1;
                if pick % 3 == 0 {
                    s.push_str("meld h t h\nmakeheap t\n");
                    live.append(&mut side);
                }
            }
            _ => s.push_str("findmin h\n"),
        }
    }
    s
}

fn configs() -> Vec<ExecConfig> {
    let mut v: Vec<ExecConfig> =
        VariantConfig::STANDARD.iter().map(|&c| ExecConfig::new(c).verify(Verify::Full)).collect();
    for method in [RebuildMethod::Disassemble, RebuildMethod::Contract] {
        let rc = RebuildConfig::new(2.0, method, RebuildTrigger::AnyOp).unwrap();
        v.push(
            ExecConfig::new(VariantConfig::MULTI_ROOT)
                .verify(Verify::Full)
                .rebuild(Some(rc))
                .in_place_root_decrease(true),
        );
        v.push(ExecConfig::new(VariantConfig::TWO_PARENT).verify(Verify::Full).rebuild(Some(rc)));
    }
    v
}

fn choices() -> impl Strategy<Value = Vec<(u8, u32, i64)>> {
    prop::collection::vec((0u8..7, any::<u32>(), -10_000i64..10_000), 1..250)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn every_structure_matches_the_oracle(c in choices()) {
        let text = script(&c);
        let w = Workload::parse(&text).unwrap();
        let r = differential_run(&w, &configs(), false);
        prop_assert!(r.invalid.is_none(), "script rejected by the oracle: {:?}\n{text}", r.invalid);
        prop_assert!(r.divergence.is_none(), "{:?}\n{text}", r.divergence);
        for e in &r.variants {
            prop_assert!(e.ok(), "{}: {:?} {:?}\n{text}", e.variant, e.error, e.violations.first());
            prop_assert_eq!(e.rebuilds.not_compact, 0);
        }
    }

    #[test]
    fn scripts_survive_a_text_round_trip(c in choices()) {
        let w = Workload::parse(&script(&c)).unwrap();
        let again = Workload::parse(&w.to_text()).unwrap();
        prop_assert_eq!(&w.ops, &again.ops);
    }
}
