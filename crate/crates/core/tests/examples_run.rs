// Every cargo example, compiled into the test binary and run to completion.

mod build_field {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/build_field.rs"
    ));

    #[test]
    fn runs() {
        main().expect("example build_field should run");
    }
}

mod characters {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/characters.rs"
    ));

    #[test]
    fn runs() {
        main().expect("example characters should run");
    }
}

mod classify {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/classify.rs"));

    #[test]
    fn runs() {
        main().expect("example classify should run");
    }
}

mod count_knormal {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/count_knormal.rs"
    ));

    #[test]
    fn runs() {
        main().expect("example count_knormal should run");
    }
}

mod estimates {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/estimates.rs"
    ));

    #[test]
    fn runs() {
        main().expect("example estimates should run");
    }
}

mod identity {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/identity.rs"));

    #[test]
    fn runs() {
        main().expect("example identity should run");
    }
}

mod search {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/search.rs"));

    #[test]
    fn runs() {
        main().expect("example search should run");
    }
}

mod sieve_tables {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/sieve_tables.rs"
    ));

    #[test]
    fn runs() {
        main().expect("example sieve_tables should run");
    }
}

mod trace_lift {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/trace_lift.rs"
    ));

    #[test]
    fn runs() {
        main().expect("example trace_lift should run");
    }
}
