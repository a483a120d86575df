use proptest::prelude::*;

use zetacorr::report::{parse_corr_csv, write_corr_csv, ReportRow};
use zetacorr::zeros::{parse_zero_table, ZeroRecord, ZeroTable};
use num_complex::Complex64;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), -10.0..10.0f64]
}

proptest! {
    #[test]
    fn corr_rows_roundtrip(rows in prop::collection::vec((2u64..1u64 << 40, finite(), finite(), prop::option::of(finite())), 0..40)) {
        let rows: Vec<ReportRow> = rows
            .into_iter()
            .map(|(n, raw, norm, reference)| ReportRow { n_or_t: n as f64, raw_sum: raw, normalized: norm, reference_line: reference })
            .collect();
        let mut buf = Vec::new();
        write_corr_csv(&mut buf, &rows).unwrap();
        let back = parse_corr_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        prop_assert_eq!(back, rows);
    }

    #[test]
    fn zero_table_roundtrip(gaps in prop::collection::vec(1e-6..5.0f64, 1..60), seed in any::<u64>()) {
        let mut gamma = 14.134_725_141_734_694;
        let mut records = Vec::new();
        for (i, gap) in gaps.iter().enumerate() {
            let phase = (seed.wrapping_add(i as u64) % 1000) as f64;
            records.push(ZeroRecord::new(i as u64 + 1, gamma, Complex64::from_polar(0.5 + gap, phase)));
            gamma += gap;
        }
        let table = ZeroTable::from_records(records).unwrap();
        let text = table.to_csv();
        let back = parse_zero_table(text.as_bytes()).unwrap();
        prop_assert_eq!(back.records(), table.records());
    }
}
