use std::ffi::CStr;
use std::ptr;

use specmix_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(sm_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn model_sample_classify_round_trip() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(
            sm_model_two_block(0.5, 0.05, 400, 30, &mut model),
            SmStatus::Ok
        );
        let mut gamma = 0.0;
        assert_eq!(sm_model_divergence(model, &mut gamma), SmStatus::Ok);
        assert!((gamma - 0.25).abs() < 1e-12);
        let mut n = 0;
        assert_eq!(sm_model_individuals(model, &mut n), SmStatus::Ok);
        assert_eq!(n, 60);

        let mut sample = ptr::null_mut();
        assert_eq!(sm_sample_generate(model, 3, &mut sample), SmStatus::Ok);
        let (mut rows, mut cols) = (0, 0);
        assert_eq!(sm_sample_shape(sample, &mut rows, &mut cols), SmStatus::Ok);
        assert_eq!((rows, cols), (60, 400));

        let mut truth = vec![0usize; rows];
        assert_eq!(
            sm_sample_labels(sample, truth.as_mut_ptr(), rows),
            SmStatus::Ok
        );
        let mut labels = vec![9usize; rows];
        let st = sm_classify(sample, gamma, 0.5, 200, 2, 1, labels.as_mut_ptr(), rows);
        assert_eq!(st, SmStatus::Ok, "{}", last_error());
        assert!(last_error().is_empty());

        let (mut raw, mut rate) = (usize::MAX, -1.0);
        let st = sm_misclassification(
            labels.as_ptr(),
            truth.as_ptr(),
            rows,
            2,
            &mut raw,
            &mut rate,
        );
        assert_eq!(st, SmStatus::Ok);
        assert_eq!(raw, 0);
        assert_eq!(rate, 0.0);

        let mut parts = vec![9usize; rows];
        assert_eq!(
            sm_partition(sample, 2, parts.as_mut_ptr(), rows),
            SmStatus::Ok
        );
        assert!(parts.iter().all(|&l| l < 2));

        sm_sample_free(sample);
        sm_model_free(model);
    }
}

#[test]
fn explicit_model_and_bit_sample() {
    unsafe {
        let probs = [0.9, 0.9, 0.1, 0.1, 0.1, 0.9];
        let sizes = [2usize, 3];
        let mut model = ptr::null_mut();
        assert_eq!(
            sm_model_new(probs.as_ptr(), 2, 3, sizes.as_ptr(), &mut model),
            SmStatus::Ok
        );
        let mut gamma = 0.0;
        sm_model_divergence(model, &mut gamma);
        // rows differ by 0.8 in every coordinate
        assert!((gamma - 0.64).abs() < 1e-12);
        sm_model_free(model);

        let bits = [0.0, 1.0, 1.0, 1.0];
        let mut sample = ptr::null_mut();
        assert_eq!(
            sm_sample_from_bits(bits.as_ptr(), 2, 2, &mut sample),
            SmStatus::Ok
        );
        let mut out = [0usize; 2];
        assert_eq!(
            sm_sample_labels(sample, out.as_mut_ptr(), 2),
            SmStatus::InvalidState
        );
        assert!(!last_error().is_empty());
        sm_sample_free(sample);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut model = ptr::null_mut();
        assert_eq!(
            sm_model_two_block(0.5, 0.05, 10, 5, ptr::null_mut()),
            SmStatus::NullPointer
        );
        assert!(last_error().contains("null"));
        assert_ne!(
            sm_model_two_block(2.0, 0.0, 10, 5, &mut model),
            SmStatus::Ok
        );
        assert!(model.is_null());

        let probs = [1.5, 0.0];
        let sizes = [1usize, 1];
        assert_eq!(
            sm_model_new(probs.as_ptr(), 2, 1, sizes.as_ptr(), &mut model),
            SmStatus::InvalidParameters
        );

        let bits = [0.0, 0.5];
        let mut sample = ptr::null_mut();
        assert_eq!(
            sm_sample_from_bits(bits.as_ptr(), 1, 2, &mut sample),
            SmStatus::InvalidInput
        );

        let mut d = 0.0;
        assert_eq!(
            sm_model_divergence(ptr::null(), &mut d),
            SmStatus::NullPointer
        );

        assert_eq!(
            sm_model_two_block(0.5, 0.0, 20, 5, &mut model),
            SmStatus::Ok
        );
        let mut s = ptr::null_mut();
        sm_sample_generate(model, 0, &mut s);
        let mut short = [0usize; 3];
        assert_eq!(
            sm_partition(s, 2, short.as_mut_ptr(), 3),
            SmStatus::InvalidInput
        );
        assert_eq!(
            sm_partition(s, 0, short.as_mut_ptr(), 3),
            SmStatus::InvalidParameters
        );
        sm_sample_free(s);
        sm_model_free(model);

        sm_model_free(ptr::null_mut());
        sm_sample_free(ptr::null_mut());
    }
}

#[test]
fn version_and_header() {
    let v = unsafe { CStr::from_ptr(sm_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/specmix.h")).unwrap();
    for name in [
        "SM_STATUS_OK",
        "typedef struct SmModel SmModel",
        "sm_classify",
        "sm_partition",
        "sm_last_error_message",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
