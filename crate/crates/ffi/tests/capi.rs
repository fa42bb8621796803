use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use hyperrun_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { hr_string_free(s) };
    out
}

fn last_error() -> Option<String> {
    let p = hr_last_error();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn loose_path(r: u32, n: u32) -> HrStructure {
    HrStructure {
        family: HrFamily::LoosePath,
        r,
        n,
        m: 0,
    }
}

#[test]
fn counts_match_known_values() {
    let s = hr_session_new(0);
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            hr_count(s, &loose_path(3, 2), 1, 3, HrEngine::Formula, &mut out),
            HrStatus::Ok
        );
        assert_eq!(take(out), "8");
        assert_eq!(
            hr_count(s, &loose_path(2, 3), 2, 2, HrEngine::Oracle, &mut out),
            HrStatus::Ok
        );
        assert_eq!(take(out), "6");
        hr_session_free(s);
    }
}

#[test]
fn big_counts_are_decimal_strings() {
    let s = hr_session_new(0);
    let mut out = ptr::null_mut();
    unsafe {
        let st = loose_path(5, 40);
        assert_eq!(
            hr_count(s, &st, 3, 80, HrEngine::Formula, &mut out),
            HrStatus::Ok
        );
        let text = take(out);
        assert!(
            text.len() > 20 && text.bytes().all(|b| b.is_ascii_digit()),
            "{text}"
        );
        hr_session_free(s);
    }
}

#[test]
fn table_json_round_trips() {
    let s = hr_session_new(0);
    let mut out = ptr::null_mut();
    let st = HrStructure {
        family: HrFamily::LooseCycle,
        r: 3,
        n: 5,
        m: 0,
    };
    unsafe {
        assert_eq!(
            hr_table_json(s, &st, 2, HrEngine::Formula, &mut out),
            HrStatus::Ok
        );
        let json = take(out);
        let doc = hyperrun::TableDocument::from_json(&json).unwrap();
        assert_eq!(doc.meta.vertex_count, 10);
        assert_eq!(doc.to_json(), json);
        hr_session_free(s);
    }
}

#[test]
fn reliability_float_and_exact_agree() {
    let s = hr_session_new(0);
    let st = loose_path(2, 2);
    let mut x = 0.0;
    let mut out = ptr::null_mut();
    let half = CString::new("1/2").unwrap();
    unsafe {
        assert_eq!(hr_reliability(s, &st, 1, 0.5, &mut x), HrStatus::Ok);
        assert!((x - 0.625).abs() < 1e-12);
        assert_eq!(
            hr_reliability_exact(s, &st, 1, half.as_ptr(), &mut out),
            HrStatus::Ok
        );
        assert_eq!(take(out), "5/8");
        hr_session_free(s);
    }
}

#[test]
fn errors_set_status_and_message() {
    let s = hr_session_new(26);
    let mut out = ptr::null_mut();
    let mut x = 0.0;
    unsafe {
        let bad = HrStructure {
            family: HrFamily::TightCycle,
            r: 3,
            n: 4,
            m: 0,
        };
        assert_eq!(
            hr_count(s, &bad, 1, 0, HrEngine::Formula, &mut out),
            HrStatus::InvalidArgument
        );
        assert!(last_error().is_some());

        assert_eq!(
            hr_count(s, &loose_path(3, 20), 1, 5, HrEngine::Oracle, &mut out),
            HrStatus::BudgetExceeded
        );
        assert!(last_error().unwrap().contains("budget"));

        assert_eq!(
            hr_reliability(s, &loose_path(2, 2), 1, 1.5, &mut x),
            HrStatus::InvalidArgument
        );

        assert_eq!(
            hr_count(
                ptr::null(),
                &loose_path(2, 2),
                1,
                0,
                HrEngine::Formula,
                &mut out
            ),
            HrStatus::NullPointer
        );
        assert_eq!(
            hr_count(
                s,
                &loose_path(2, 2),
                1,
                0,
                HrEngine::Formula,
                ptr::null_mut()
            ),
            HrStatus::NullPointer
        );

        assert_eq!(
            hr_count(s, &loose_path(2, 2), 1, 0, HrEngine::Formula, &mut out),
            HrStatus::Ok
        );
        assert!(last_error().is_none());
        take(out);
        hr_session_free(s);
        hr_session_free(ptr::null_mut());
        hr_string_free(ptr::null_mut());
    }
}

#[test]
fn vertex_counts() {
    let mut v = 0usize;
    let m = HrStructure {
        family: HrFamily::MTightPath,
        r: 4,
        n: 3,
        m: 2,
    };
    unsafe {
        assert_eq!(hr_vertex_count(&loose_path(3, 4), &mut v), HrStatus::Ok);
        assert_eq!(v, 9);
        assert_eq!(hr_vertex_count(&m, &mut v), HrStatus::Ok);
        assert_eq!(v, 8);
    }
}

#[test]
fn session_shared_across_threads() {
    struct Shared(*mut HrSession);
    unsafe impl Send for Shared {}
    unsafe impl Sync for Shared {}
    let s = Shared(hr_session_new(0));
    let results: Vec<String> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let s = &s;
                scope.spawn(move || {
                    let mut out = ptr::null_mut();
                    let st = loose_path(3, 12);
                    assert_eq!(
                        unsafe { hr_count(s.0, &st, 2, 10, HrEngine::Formula, &mut out) },
                        HrStatus::Ok
                    );
                    take(out)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    assert!(results.windows(2).all(|w| w[0] == w[1]));
    unsafe { hr_session_free(s.0) };
}

#[test]
fn header_is_generated_and_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/hyperrun.h");
    let text = std::fs::read_to_string(&header).expect("header written by build script");
    for name in [
        "hr_session_new",
        "hr_session_free",
        "hr_count",
        "hr_table_json",
        "hr_reliability",
        "hr_reliability_exact",
        "hr_string_free",
        "hr_last_error",
        "HR_STATUS_BUDGET_EXCEEDED",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let src = std::env::temp_dir().join(format!("hyperrun_header_{}.c", std::process::id()));
    std::fs::write(
        &src,
        "#include \"hyperrun.h\"\nint main(void){HrStructure s={HR_FAMILY_LOOSE_PATH,3,2,0};(void)s;return 0;}\n",
    )
    .unwrap();
    let status = Command::new(&cc)
        .arg("-fsyntax-only")
        .arg("-Wall")
        .arg("-I")
        .arg(header.parent().unwrap())
        .arg(&src)
        .status();
    let _ = std::fs::remove_file(&src);
    match status {
        Ok(st) => assert!(st.success(), "header failed to compile"),
        Err(_) => eprintln!("no C compiler found, header compile skipped"),
    }
}
