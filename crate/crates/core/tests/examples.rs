#![allow(dead_code)]

mod parse_expressions {
    include!("../examples/parse_expressions.rs");

    #[test]
    fn runs() {
        run().unwrap();
    }
}

mod mittag_leffler {
    include!("../examples/mittag_leffler.rs");

    #[test]
    fn runs() {
        run().unwrap();
    }
}

mod fractional_operators {
    include!("../examples/fractional_operators.rs");

    #[test]
    fn runs() {
        run().unwrap();
    }
}

mod green_kernel {
    include!("../examples/green_kernel.rs");

    #[test]
    fn runs() {
        run().unwrap();
    }
}

mod lyapunov_bounds {
    include!("../examples/lyapunov_bounds.rs");

    #[test]
    fn runs() {
        run().unwrap();
    }
}

mod existence_theta {
    include!("../examples/existence_theta.rs");

    #[test]
    fn runs() {
        run().unwrap();
    }
}

mod picard_solve {
    include!("../examples/picard_solve.rs");

    #[test]
    fn runs() {
        run().unwrap();
    }
}

mod eigenpairs {
    include!("../examples/eigenpairs.rs");

    #[test]
    fn runs() {
        run().unwrap();
    }
}

mod verify_paper {
    include!("../examples/verify_paper.rs");

    #[test]
    fn runs() {
        run().unwrap();
    }
}
