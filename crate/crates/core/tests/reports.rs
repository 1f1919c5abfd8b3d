//! Reports from real scans: serialization round trips and checksums that
//! ignore worker count and sieve segmentation.

use leopoldt::cubic::{scan_cubic, CubicMode};
use leopoldt::data::{load_cubic_fields, load_quadratic_fields, DataSource};
use leopoldt::primes::{PrimeRange, SieveConfig};
use leopoldt::quadratic::scan_quadratic;
use leopoldt::report::ScanReport;
use leopoldt::scan::ScanOptions;

fn opts(workers: usize, segment: usize) -> ScanOptions {
    let mut o = ScanOptions::with_workers(workers).full();
    o.sieve = SieveConfig::with_segment_odds(segment);
    o
}

#[test]
fn quadratic_reports_roundtrip_and_agree() {
    let range = PrimeRange::new(2, 20_000).unwrap();
    for rec in load_quadratic_fields(&DataSource::Embedded).unwrap() {
        let base = scan_quadratic(&rec, range, &opts(1, 1 << 20)).unwrap();
        assert_eq!(ScanReport::from_json(&base.to_json()).unwrap(), base);
        for (w, seg) in [(3, 1 << 20), (5, 977)] {
            let other = scan_quadratic(&rec, range, &opts(w, seg)).unwrap();
            assert_eq!(other.checksum, base.checksum, "D = {}", rec.d());
            assert_eq!(other.hits, base.hits);
            assert_eq!(other.excluded, base.excluded);
        }
    }
}

#[test]
fn cubic_reports_roundtrip_and_agree() {
    let range = PrimeRange::new(2, 20_000).unwrap();
    for rec in load_cubic_fields(&DataSource::Embedded).unwrap() {
        for mode in [CubicMode::Ordinary, CubicMode::H2] {
            let base = scan_cubic(&rec, range, mode, &opts(1, 1 << 20)).unwrap();
            assert_eq!(ScanReport::from_json(&base.to_json()).unwrap(), base);
            let other = scan_cubic(&rec, range, mode, &opts(4, 1500)).unwrap();
            assert_eq!(other.checksum, base.checksum, "delta = {}", rec.delta());
            // every prime in range is accounted for exactly once
            let total = base.hits.len() + base.excluded.as_ref().unwrap().len() + base.clear_count as usize;
            assert_eq!(total, 2262);
        }
    }
}

#[test]
fn checksum_detects_content_changes() {
    let rec = &load_quadratic_fields(&DataSource::Embedded).unwrap()[0];
    let r = scan_quadratic(rec, PrimeRange::new(3, 1000).unwrap(), &ScanOptions::serial()).unwrap();
    let mut tampered = r.clone();
    tampered.hits.pop();
    assert_ne!(tampered.compute_checksum(), r.checksum);
    let mut timing = r.clone();
    timing.metadata.wall_time_ms += 1000;
    timing.metadata.workers = 64;
    assert_eq!(timing.compute_checksum(), r.checksum);
}

#[test]
fn clear_count_does_not_depend_on_full_verdicts() {
    let range = PrimeRange::new(2, 20_000).unwrap();
    let rec = &load_cubic_fields(&DataSource::Embedded).unwrap()[0];
    let short = scan_cubic(rec, range, CubicMode::H2, &ScanOptions::serial()).unwrap();
    let full = scan_cubic(rec, range, CubicMode::H2, &opts(1, 1 << 20)).unwrap();
    assert!(short.excluded.is_none());
    assert!(short.clear_count > 0);
    assert_eq!(short.clear_count, full.clear_count);
    assert_eq!(short.hits, full.hits);
}
