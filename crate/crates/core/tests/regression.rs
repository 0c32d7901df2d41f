//! Frozen generator outputs. A hash change means every downstream corpus
//! changed too, so these must only be updated deliberately.

use blockpart::generators::{
    content_hash, grid, layered_genus_instance, partial_k_tree, regular_high_girth,
    stacked_triangulation, CorpusManifest,
};

#[test]
fn triangulation_n10_seed1() {
    let t = stacked_triangulation(10, 1).unwrap();
    assert_eq!(
        serde_json::to_string(&t.graph).unwrap(),
        r#"{"n":10,"edges":[[0,1],[0,2],[0,3],[0,5],[0,6],[1,2],[1,3],[1,4],[1,5],[1,6],[1,8],[1,9],[2,3],[2,4],[2,7],[2,8],[3,4],[3,5],[3,7],[3,9],[4,7],[4,8],[4,9],[5,6]]}"#
    );
    assert_eq!(
        content_hash(&t.graph),
        "830472825fe12cf3fffcac3948fb35364d9f966d3471a6aceff1ce8edc430ee5"
    );
    assert_eq!(
        content_hash(&t.embedding),
        "3efdfabb0c74cf567f6356725268477dfc88fcaba26496e7d2607ec557db4cfb"
    );
    // Euler: V − E + F = 2 with all faces triangles
    let faces = t.embedding.faces();
    assert_eq!(10 + faces.len(), t.graph.m() + 2);
    assert!(faces.iter().all(|f| f.len() == 3));
    assert_eq!(t.graph.max_degree(), 8);
}

#[test]
fn layered_genus_g1_seed7() {
    let inst = layered_genus_instance(1, 12, 8, 7).unwrap();
    assert_eq!(inst.columns, vec![1, 4]);
    assert_eq!(
        content_hash(&inst.graph),
        "41921aeb3de05fabad32a5475d05d2d4f5e1abe431f5fbe7f65405450a6c2193"
    );
    assert_eq!(
        content_hash(&inst.tree),
        "3550fe0dfd76dd06ceeb7765d3f3329974cfbc7e501c6cfafb899276728bde7e"
    );
    assert_eq!(
        content_hash(&inst.layering),
        "99ea50423be8756d8b3352d7ba62baa9be4a31b3675785d5aef49db6aa116053"
    );
    inst.tree.validate(&inst.graph, &inst.layering).unwrap();
}

#[test]
fn other_generators() {
    let g = regular_high_girth(200, 8, 1, 100_000).unwrap();
    assert_eq!(
        content_hash(&g),
        "e9ce83cfd726299e83d15b721cfd17e6bf2829deee9c2ad3852b6184258fe709"
    );
    let k = partial_k_tree(50, 3, 8, 2).unwrap();
    assert_eq!(
        content_hash(&k.graph),
        "a0ca8aa0c5d64e3e1c74e45e32351313eb2dc9fcd08577cbcf21ecb2b741caa1"
    );
    assert_eq!(
        content_hash(&k.decomposition),
        "37c1fe4e18393b1ff15fef036753fc8ca336c2773d0ce949c79b8827b43010b4"
    );
    let gi = grid(12, 12).unwrap();
    assert_eq!((gi.graph.n(), gi.graph.m()), (144, 264));
    assert_eq!(gi.decomposition.width(), 12);
}

#[test]
fn manifest_lists_hashes() {
    let mut m = CorpusManifest::default();
    let t = stacked_triangulation(10, 1).unwrap();
    m.add(
        "tri",
        "stacked_triangulation",
        1,
        serde_json::json!({"n": 10}),
        &t.graph,
    );
    let text = serde_json::to_string(&m).unwrap();
    assert!(text.contains("830472825fe12cf3fffcac3948fb35364d9f966d3471a6aceff1ce8edc430ee5"));
    let back: CorpusManifest = serde_json::from_str(&text).unwrap();
    assert_eq!(back, m);
}
