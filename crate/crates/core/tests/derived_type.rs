mod common;

use std::time::Instant;

use goursat_core::geometry::refined_derived_type;

#[test]
fn example51_refined_type() {
    let t = Instant::now();
    let f = refined_derived_type(&common::example51()).unwrap();
    eprintln!("example51 derived type in {:?}", t.elapsed());
    assert_eq!(
        f.record.to_lists(),
        [vec![6, 0], vec![11, 5, 7], vec![14, 10, 10], vec![17, 13, 14], vec![19, 16, 16], vec![21, 21]]
    );
}
