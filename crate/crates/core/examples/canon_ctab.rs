//! Rewrites `.ctab` files in canonical printed form, keeping leading comment lines,
//! and reports validation time.

use std::time::Instant;

use trianglecount::chartab::{parse_table, validate};

fn main() {
    for path in std::env::args().skip(1) {
        let text = std::fs::read_to_string(&path).expect("read table");
        let header: String = text
            .lines()
            .take_while(|l| l.starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect();
        let t = parse_table(&text).unwrap_or_else(|e| panic!("{path}: {e}"));
        let start = Instant::now();
        let report = validate(&t);
        let elapsed = start.elapsed();
        print!("{report}");
        println!(
            "{path}: {} classes, validated in {elapsed:.2?}",
            t.class_count()
        );
        std::fs::write(&path, header + &t.to_ctab()).expect("write table");
    }
}
