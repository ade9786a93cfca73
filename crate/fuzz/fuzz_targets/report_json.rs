#![no_main]

use cover_jacobians::report::{report_from_json, to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    // Anything that parses must serialize and parse back to the same document.
    if let Ok(doc) = report_from_json(text) {
        let again = report_from_json(&to_json(&doc)).expect("re-serialized report parses");
        assert_eq!(again, doc);
    }
});
