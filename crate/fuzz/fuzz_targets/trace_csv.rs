#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(rows) = hypersc_cli::formats::parse_trace_csv(text) {
            let _ = hypersc_cli::formats::validate_trace(&rows);
        }
    }
});
