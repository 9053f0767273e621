//! Median-split bounding volume hierarchy over triangle boxes.

use super::tri::Aabb;
use super::vec3::Point3;

const LEAF_SIZE: usize = 4;

#[derive(Debug, Clone)]
struct Node {
    bounds: Aabb,
    // leaf: items[start..end]; inner: children
    start: usize,
    end: usize,
    children: Option<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub struct Bvh {
    nodes: Vec<Node>,
    items: Vec<usize>,
    boxes: Vec<Aabb>,
}

impl Bvh {
    pub fn build(boxes: Vec<Aabb>) -> Self {
        let mut items: Vec<usize> = (0..boxes.len()).collect();
        let mut nodes = Vec::new();
        if !boxes.is_empty() {
            build_node(&boxes, &mut items, 0, boxes.len(), &mut nodes);
        }
        Self { nodes, items, boxes }
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn item_box(&self, i: usize) -> &Aabb {
        &self.boxes[i]
    }

    /// Visits every item whose box overlaps `query`.
    pub fn for_each_overlap(&self, query: &Aabb, mut f: impl FnMut(usize)) {
        if self.nodes.is_empty() {
            return;
        }
        let mut stack = vec![0usize];
        while let Some(n) = stack.pop() {
            let node = &self.nodes[n];
            if !node.bounds.overlaps(query) {
                continue;
            }
            match node.children {
                Some((l, r)) => {
                    stack.push(l);
                    stack.push(r);
                }
                None => {
                    for &it in &self.items[node.start..node.end] {
                        if self.boxes[it].overlaps(query) {
                            f(it);
                        }
                    }
                }
            }
        }
    }

    /// Nearest item to `p` under the exact distance `dist`, pruning with box
    /// distances. Returns `(distance, item)`.
    pub fn nearest(&self, p: Point3, dist: impl Fn(usize) -> f64) -> Option<(f64, usize)> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut best = (f64::INFINITY, usize::MAX);
        let mut stack = vec![(0usize, self.nodes[0].bounds.dist_sq(p))];
        while let Some((n, bd)) = stack.pop() {
            if bd >= best.0 * best.0 {
                continue;
            }
            let node = &self.nodes[n];
            match node.children {
                Some((l, r)) => {
                    let dl = self.nodes[l].bounds.dist_sq(p);
                    let dr = self.nodes[r].bounds.dist_sq(p);
                    // push the farther child first so the nearer is visited first
                    if dl < dr {
                        stack.push((r, dr));
                        stack.push((l, dl));
                    } else {
                        stack.push((l, dl));
                        stack.push((r, dr));
                    }
                }
                None => {
                    for &it in &self.items[node.start..node.end] {
                        if self.boxes[it].dist_sq(p) >= best.0 * best.0 {
                            continue;
                        }
                        let d = dist(it);
                        if d < best.0 {
                            best = (d, it);
                        }
                    }
                }
            }
        }
        Some(best)
    }
}

fn build_node(boxes: &[Aabb], items: &mut [usize], start: usize, end: usize, nodes: &mut Vec<Node>) -> usize {
    let mut bounds = Aabb::empty();
    let mut cbounds = Aabb::empty();
    for &it in &items[start..end] {
        bounds = bounds.union(&boxes[it]);
        cbounds.grow(boxes[it].center());
    }
    let idx = nodes.len();
    nodes.push(Node { bounds, start, end, children: None });
    if end - start <= LEAF_SIZE {
        return idx;
    }
    let ext = cbounds.hi - cbounds.lo;
    let axis = if ext.x >= ext.y && ext.x >= ext.z {
        0
    } else if ext.y >= ext.z {
        1
    } else {
        2
    };
    let mid = (start + end) / 2;
    items[start..end].select_nth_unstable_by(mid - start, |a, b| {
        boxes[*a].center()[axis].total_cmp(&boxes[*b].center()[axis]).then(a.cmp(b))
    });
    let l = build_node(boxes, items, start, mid, nodes);
    let r = build_node(boxes, items, mid, end, nodes);
    nodes[idx].children = Some((l, r));
    idx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlap_query_matches_brute_force() {
        let boxes: Vec<Aabb> = (0..100)
            .map(|i| {
                let x = (i % 10) as f64;
                let y = (i / 10) as f64;
                Aabb::of(&[Point3::new(x, y, 0.0), Point3::new(x + 0.6, y + 0.6, 0.1)])
            })
            .collect();
        let bvh = Bvh::build(boxes.clone());
        let q = Aabb::of(&[Point3::new(2.5, 2.5, 0.0), Point3::new(4.2, 3.1, 0.0)]);
        let mut got = Vec::new();
        bvh.for_each_overlap(&q, |i| got.push(i));
        got.sort_unstable();
        let want: Vec<usize> = (0..100).filter(|&i| boxes[i].overlaps(&q)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn nearest_matches_brute_force() {
        let pts: Vec<Point3> = (0..50).map(|i| Point3::new(i as f64 * 0.37 % 3.0, i as f64 * 0.11, 0.0)).collect();
        let boxes = pts.iter().map(|p| Aabb::of(&[*p])).collect();
        let bvh = Bvh::build(boxes);
        let q = Point3::new(1.0, 2.0, 0.5);
        let (d, _) = bvh.nearest(q, |i| pts[i].dist(q)).unwrap();
        let want = pts.iter().map(|p| p.dist(q)).fold(f64::INFINITY, f64::min);
        assert_eq!(d, want);
    }
}
