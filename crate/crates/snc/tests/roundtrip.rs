use proptest::prelude::*;
use snc::SncFile;

fn poly() -> impl Strategy<Value = String> {
    let term = (-4i32..=4, 0u32..=2, 0u32..=2, 0u32..=1).prop_filter("nonzero", |t| t.0 != 0).prop_map(|(c, a, b, e)| {
        let mut s = format!("{c}");
        for (v, k) in [("x", a), ("y", b), ("z", e)] {
            if k > 0 {
                s.push_str(&format!("*{v}^{k}"));
            }
        }
        s
    });
    prop::collection::vec(term, 1..=3).prop_map(|ts| ts.join(" + "))
}

fn file() -> impl Strategy<Value = String> {
    (
        prop::collection::vec(prop::collection::vec(poly(), 1..=2), 1..=3),
        prop::collection::vec((1i32..=9, 1i32..=4, poly()), 0..=2),
        prop::collection::vec(prop::collection::vec(-5i32..=5, 3), 0..=2),
    )
        .prop_map(|(comps, parts, points)| {
            let mut s = String::from("ring x y z\n");
            for (k, c) in comps.iter().enumerate() {
                s.push_str(&format!("component C{k} = {}\n", c.join(", ")));
            }
            if !parts.is_empty() {
                let terms: Vec<String> = parts.iter().map(|(n, d, p)| format!("{n}/{d} * [{p}]")).collect();
                s.push_str(&format!("divisor D = {}\n", terms.join(" + ")));
            }
            for (k, p) in points.iter().enumerate() {
                let cs: Vec<String> = p.iter().map(|c| c.to_string()).collect();
                s.push_str(&format!("point p{k} = {}\n", cs.join(" ")));
            }
            s
        })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(text in file()) {
        let f = SncFile::parse(&text).unwrap();
        let printed = f.to_string();
        let again = SncFile::parse(&printed).unwrap();
        prop_assert_eq!(&again, &f);
        prop_assert_eq!(again.to_string(), printed);
    }
}
