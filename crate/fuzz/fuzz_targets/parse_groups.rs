#![no_main]

use libfuzzer_sys::fuzz_target;
use normball::harness::parse_groups;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(sizes) = parse_groups(text) {
        assert!(!sizes.is_empty());
        assert!(sizes.iter().all(|s| *s > 0));
    }
});
