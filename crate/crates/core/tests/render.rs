use std::collections::HashMap;

use perclab::generators::{grid_with_poles, regular_hyperbolic_triangulation, triangular_lattice_disk};
use perclab::harness::render::{render_clusters, render_packing, render_pair, render_tessellation, render_tiling};
use perclab::harness::seed;
use perclab::hyperbolic::{build_tessellation, sample_poisson_hyperbolic, IdealBoundaryQuad};
use perclab::network::TwoTerminalGraph;
use perclab::packing::{pack, PackingOptions};
use perclab::percolation::{clusters, sample_sites};
use perclab::tiling::{tile_from_two_terminal, SquareTiling, TileColoring};

/// Element children of the group with the given id.
fn group<'a>(doc: &'a roxmltree::Document<'a>, id: &str) -> Vec<roxmltree::Node<'a, 'a>> {
    let g = doc
        .descendants()
        .find(|n| n.has_tag_name("g") && n.attribute("id") == Some(id))
        .expect("group present");
    g.children().filter(|n| n.is_element()).collect()
}

#[test]
fn wheel_packing_has_seven_circles() {
    let t = triangular_lattice_disk(1).unwrap();
    let svg = render_packing(&pack(&t, None, PackingOptions::default()).unwrap());
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let items = group(&doc, "objects");
    assert_eq!(items.len(), 7);
    assert!(items.iter().all(|n| n.has_tag_name("circle")));
}

#[test]
fn empty_tiling_is_valid_svg() {
    let svg = render_tiling(&SquareTiling::from_tiles(1.0, 1.0, None, Vec::new(), 0), None);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert!(group(&doc, "objects").is_empty());
}

#[test]
fn tiling_has_one_element_per_tile_and_two_colors() {
    let t = tile_from_two_terminal(&grid_with_poles(5, 6).unwrap(), 1e-12).unwrap();
    let coloring = TileColoring::sample(t.len(), 0.5, 3);
    let svg = render_tiling(&t, Some(&coloring));
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let items = group(&doc, "objects");
    assert_eq!(items.len(), t.len());
    for (n, &black) in items.iter().zip(&coloring.black) {
        assert_eq!(n.attribute("fill"), Some(if black { "black" } else { "white" }));
    }
}

#[test]
fn cylinder_tiling_renders_every_tile() {
    let tri = regular_hyperbolic_triangulation(7, 3).unwrap();
    let t = tile_from_two_terminal(&TwoTerminalGraph::from_triangulation(&tri, 0), 1e-12).unwrap();
    assert!(t.period.is_some());
    let doc_text = render_tiling(&t, None);
    let doc = roxmltree::Document::parse(&doc_text).unwrap();
    assert_eq!(group(&doc, "objects").len(), t.len());
}

#[test]
fn cluster_overlay_colors_each_cluster_distinctly() {
    let t = triangular_lattice_disk(8).unwrap();
    let p = pack(&t, None, PackingOptions::default()).unwrap();
    let config = sample_sites(t.vertex_count(), 0.5, seed::trial_seed(1, "render", 0));
    let labels = clusters(t.rotation(), &config);
    let svg = render_clusters(&p, &config, &labels);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let items = group(&doc, "objects");
    assert_eq!(items.len(), t.vertex_count());
    let mut fill_of: HashMap<usize, String> = HashMap::new();
    let mut cluster_of: HashMap<String, usize> = HashMap::new();
    for (v, n) in items.iter().enumerate() {
        let fill = n.attribute("fill").unwrap().to_string();
        match labels.label[v] {
            None => assert_eq!(fill, "none"),
            Some(k) => {
                assert_eq!(fill_of.entry(k).or_insert_with(|| fill.clone()), &fill);
                assert_eq!(*cluster_of.entry(fill).or_insert(k), k);
            }
        }
    }
    assert_eq!(fill_of.len(), labels.sizes.len());
}

#[test]
fn tessellation_has_one_dot_per_site() {
    let q = IdealBoundaryQuad::new(0.0, 1.0, 3.0, 4.0).unwrap();
    let s = sample_poisson_hyperbolic(10.0, 3.0, 4, None).unwrap();
    let v = build_tessellation(&s, &q);
    let colors = v.colors(0.5, 9);
    let svg = render_tessellation(&v, Some(&colors));
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(group(&doc, "objects").len(), v.sites.len());
}

#[test]
fn figure_pairs_packing_and_tiling() {
    let t = regular_hyperbolic_triangulation(7, 3).unwrap();
    let p = pack(&t, None, PackingOptions::default()).unwrap();
    let tiling = tile_from_two_terminal(&TwoTerminalGraph::from_triangulation(&t, 0), 1e-12).unwrap();
    let svg = render_pair(&p, &tiling);
    let doc = roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(group(&doc, "packing").len(), t.vertex_count());
    assert_eq!(group(&doc, "tiling").len(), tiling.len());
}
