mod common;

use common::props;

const CASES: u32 = 256;

macro_rules! property {
    ($name:ident) => {
        #[test]
        fn $name() {
            if let Err(e) = props::$name(CASES) {
                panic!("{e}");
            }
        }
    };
}

property!(generated_ranges_are_valid);
property!(peaks_exceed_valleys_by_one);
property!(stabilizations_commute);
property!(parity_is_conserved);
property!(cones_are_closed);
property!(bennequin_bound);
property!(sum_invariants_add);
property!(generators_preserve_invariants);
property!(canonicalization_is_stable);
property!(fiber_sizes_are_translation_invariant);
property!(reverse_is_an_involution);
property!(realization_is_sound);
property!(connecting_paths_are_found_and_sound);
