mod finite_fields {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/finite_fields.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod klein_modules {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/klein_modules.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod decomposition {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/decomposition.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod tilting_modules {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tilting_modules.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod verlinde_algebra {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verlinde_algebra.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod theta_functors {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/theta_functors.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod phi_exactness {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/phi_exactness.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod conjecture_scan {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/conjecture_scan.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}

mod verify_suites {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/verify_suites.rs"));

    #[test]
    fn runs() {
        run_example();
    }
}
