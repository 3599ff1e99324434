//! Endomorphism documents: emit, parse and resolve against a context.

use qtrace::document::EndoDocument;
use qtrace::endo::{EndoContext, GradedEndo};
use qtrace::exterior::{ExteriorContext, WedgeEndo, WedgeIndex};

fn main() {
    let ctx = EndoContext::sl_exterior(1).unwrap();
    let doc = EndoDocument::from_graded(&GradedEndo::grade_identity(&ctx, 1));
    print!("{}", doc.to_json());

    let ext = ExteriorContext::new(1).unwrap();
    let mut e22 = WedgeEndo::zero(2, 1);
    let w = WedgeIndex::new(vec![2]).unwrap();
    e22.set(&w, &w, "1".parse().unwrap()).unwrap();
    let wdoc = EndoDocument::from_wedge(&ext, vec![e22]).unwrap();
    let json = wdoc.to_json();
    print!("{json}");

    let back = EndoDocument::parse(&json).unwrap();
    let a = back.resolve(&ctx).unwrap();
    println!("round trip equal: {}", back == wdoc);
    println!("Tr_q(E_22) = {}", a.q_trace().unwrap());
}
