//! Finitely presented graded modules over `R` or `A = R/I`, realized one
//! internal degree at a time.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{GradedFreeModule, GradedMap};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Mono, Poly};
use crate::strand::ring::{NormalForm, Ring, SparseAcc};

/// Coordinates of `⊕_g B_{d - a_g}` for a free module over a ring `B`.
#[derive(Clone, Debug)]
pub struct FreeCover {
    pub d: i32,
    /// Start of each generator block (blocks of generators above `d` are empty).
    pub offsets: Vec<usize>,
    pub dims: Vec<usize>,
    pub dim: usize,
}

impl FreeCover {
    pub fn new<F: Field>(ring: &Ring<F>, twists: &[i32], d: i32) -> Self {
        let mut offsets = Vec::with_capacity(twists.len());
        let mut dims = Vec::with_capacity(twists.len());
        let mut dim = 0;
        for &a in twists {
            offsets.push(dim);
            let k = ring.dim(d - a);
            dims.push(k);
            dim += k;
        }
        FreeCover {
            d,
            offsets,
            dims,
            dim,
        }
    }

    /// `(generator, basis index)` of a cover coordinate.
    pub fn locate(&self, col: usize) -> (usize, usize) {
        let g = match self.offsets.binary_search(&col) {
            Ok(mut g) => {
                // Skip empty blocks sharing the offset.
                while self.dims[g] == 0 {
                    g += 1;
                }
                g
            }
            Err(g) => g - 1,
        };
        (g, col - self.offsets[g])
    }
}

/// Add `scale · p · m` placed in generator block `g` of a free cover at degree `d`.
#[allow(clippy::too_many_arguments)]
pub fn push_product<F: Field>(
    ring: &Ring<F>,
    cover: &FreeCover,
    twists: &[i32],
    g: usize,
    p: &Poly<F>,
    m: &Mono,
    scale: &F::Elem,
    acc: &mut SparseAcc<F>,
) {
    let f = ring.field();
    let e = cover.d - twists[g];
    let Some(piece) = ring.piece(e) else { return };
    let off = cover.offsets[g] as u32;
    for (pm, c) in p.terms() {
        let prod = pm.mul(m);
        let coef = f.mul(c, scale);
        match piece.normal_form(&prod) {
            NormalForm::Single(k) => acc.add(off + k, &coef),
            NormalForm::Combo(v) => {
                for (k, y) in v {
                    acc.add_mul(off + k, &coef, y);
                }
            }
        }
    }
}

/// The degree-`d` piece of a presented module.
pub struct ModulePiece<F: Field> {
    pub cover: FreeCover,
    ech: Echelon<F>,
    /// Cover coordinates forming a basis of the quotient.
    pub basis: Vec<u32>,
    pos: Vec<u32>,
}

impl<F: Field> ModulePiece<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Quotient coordinates of a cover vector.
    pub fn normal_form(&self, v: &[(u32, F::Elem)]) -> SparseVec<F> {
        let r = if self.ech.rank() == 0 {
            v.to_vec()
        } else {
            self.ech.reduce(v)
        };
        r.into_iter()
            .map(|(c, x)| {
                let q = self.pos[c as usize];
                debug_assert!(q != u32::MAX, "remainder on a pivot column");
                (q, x)
            })
            .collect()
    }

    /// `(generator, ring basis index)` of quotient basis element `q`.
    pub fn locate(&self, q: usize) -> (usize, usize) {
        self.cover.locate(self.basis[q] as usize)
    }
}

/// A graded module `coker(rels)` over `ring`, generated in degrees `gens`.
pub struct PresentedModule<F: Field> {
    pub name: String,
    pub ring: Arc<Ring<F>>,
    pub gens: GradedFreeModule,
    pub rels: GradedMap<F>,
    cache: Mutex<HashMap<i32, Arc<ModulePiece<F>>>>,
}

impl<F: Field> Clone for PresentedModule<F> {
    fn clone(&self) -> Self {
        PresentedModule {
            name: self.name.clone(),
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            rels: self.rels.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }
}

impl<F: Field> std::fmt::Debug for PresentedModule<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}: coker({} <- {})",
            self.name, self.gens, self.rels.source
        )
    }
}

impl<F: Field> PresentedModule<F> {
    pub fn new(name: &str, ring: Arc<Ring<F>>, rels: GradedMap<F>) -> Result<Self> {
        if rels.nvars() != ring.nvars() {
            return Err(Error::Incompatible(
                "presentation and ring have different variables".into(),
            ));
        }
        rels.check_degrees()?;
        Ok(PresentedModule {
            name: name.to_string(),
            ring,
            gens: rels.target.clone(),
            rels,
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// A free module over `ring`.
    pub fn free(name: &str, ring: Arc<Ring<F>>, gens: GradedFreeModule) -> Self {
        let rels = GradedMap::zero(
            ring.field(),
            ring.nvars(),
            GradedFreeModule::zero(),
            gens.clone(),
        );
        PresentedModule {
            name: name.to_string(),
            ring,
            gens,
            rels,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// The same presentation read over another ring (e.g. tensoring with `A`).
    pub fn over(&self, ring: Arc<Ring<F>>, name: &str) -> Self {
        PresentedModule {
            name: name.to_string(),
            ring,
            gens: self.gens.clone(),
            rels: self.rels.clone(),
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }
    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }
    pub fn min_degree(&self) -> Option<i32> {
        self.gens.twists.iter().copied().min()
    }

    pub fn piece(&self, d: i32) -> Arc<ModulePiece<F>> {
        if let Some(p) = self.cache.lock().expect("cache lock").get(&d) {
            return p.clone();
        }
        let p = Arc::new(self.build_piece(d));
        self.cache.lock().expect("cache lock").insert(d, p.clone());
        p
    }

    pub fn dim(&self, d: i32) -> usize {
        self.piece(d).dim()
    }

    pub fn hilbert(&self, degrees: impl Iterator<Item = i32>) -> Vec<(i32, usize)> {
        degrees.map(|d| (d, self.dim(d))).collect()
    }

    fn build_piece(&self, d: i32) -> ModulePiece<F> {
        let f = self.field();
        let cover = FreeCover::new(&self.ring, &self.gens.twists, d);
        let mut ech = Echelon::new(f, cover.dim);
        if cover.dim > 0 {
            let mut acc = SparseAcc::new(f);
            for (h, &b) in self.rels.source.twists.iter().enumerate() {
                let Some(rp) = self.ring.piece(d - b) else {
                    continue;
                };
                let col = self.rels.col(h);
                if col.is_empty() {
                    continue;
                }
                for k in 0..rp.dim() {
                    let m = rp.basis_mono(k);
                    for (g, p) in col {
                        push_product(
                            &self.ring,
                            &cover,
                            &self.gens.twists,
                            *g,
                            p,
                            &m,
                            &f.one(),
                            &mut acc,
                        );
                    }
                    let v = acc.take();
                    if !v.is_empty() {
                        ech.insert(&v);
                    }
                }
            }
        }
        let basis = ech.free_columns();
        let mut pos = vec![u32::MAX; cover.dim];
        for (q, &c) in basis.iter().enumerate() {
            pos[c as usize] = q as u32;
        }
        ModulePiece {
            cover,
            ech,
            basis,
            pos,
        }
    }

    /// Polynomial column representing quotient basis element `q` of degree `d`.
    pub fn representative(&self, d: i32, q: usize) -> Vec<(usize, Poly<F>)> {
        let piece = self.piece(d);
        let (g, b) = piece.locate(q);
        let m = self
            .ring
            .piece(d - self.gens.twists[g])
            .expect("nonempty block")
            .basis_mono(b);
        vec![(
            g,
            Poly::monomial(self.field(), self.nvars(), m, self.field().one()),
        )]
    }

    /// Polynomial column for a vector in quotient coordinates at degree `d`.
    pub fn column_of(&self, d: i32, v: &[(u32, F::Elem)]) -> Vec<(usize, Poly<F>)> {
        let piece = self.piece(d);
        let f = self.field();
        let mut per_gen: HashMap<usize, Vec<(Mono, F::Elem)>> = HashMap::new();
        for (q, x) in v {
            let (g, b) = piece.locate(*q as usize);
            let m = self
                .ring
                .piece(d - self.gens.twists[g])
                .expect("nonempty block")
                .basis_mono(b);
            per_gen.entry(g).or_default().push((m, x.clone()));
        }
        let mut out: Vec<(usize, Poly<F>)> = per_gen
            .into_iter()
            .map(|(g, t)| {
                (
                    g,
                    Poly::from_terms(f, self.nvars(), t).expect("homogeneous block"),
                )
            })
            .filter(|(_, p)| !p.is_zero())
            .collect();
        out.sort_by_key(|x| x.0);
        out
    }

    /// Quotient coordinates at degree `d` of `Σ_g col_g · m · scale`.
    pub fn image_of(
        &self,
        d: i32,
        col: &[(usize, Poly<F>)],
        m: &Mono,
        scale: &F::Elem,
    ) -> SparseVec<F> {
        let piece = self.piece(d);
        let mut acc = SparseAcc::new(self.field());
        for (g, p) in col {
            push_product(
                &self.ring,
                &piece.cover,
                &self.gens.twists,
                *g,
                p,
                m,
                scale,
                &mut acc,
            );
        }
        piece.normal_form(&acc.take())
    }

    /// `M ⊗ N`, presented by `rels_M ⊗ 1` and `1 ⊗ rels_N`; over the larger ring.
    pub fn tensor(&self, other: &PresentedModule<F>, name: &str) -> Result<Self> {
        let ring = if self.ring.is_polynomial() {
            other.ring.clone()
        } else if other.ring.is_polynomial() || other.ring.ideal() == self.ring.ideal() {
            self.ring.clone()
        } else {
            return Err(Error::Incompatible(
                "tensor over different quotient rings".into(),
            ));
        };
        let f = self.field();
        let n = self.nvars();
        let a = self.rels.tensor(&GradedMap::identity(f, n, &other.gens));
        let b = GradedMap::identity(f, n, &self.gens).tensor(&other.rels);
        let rels = crate::graded::block_map(
            f,
            n,
            &[a.source.clone(), b.source.clone()],
            &[a.target.clone()],
            &[vec![Some(&a), Some(&b)]],
        )?;
        PresentedModule::new(name, ring, rels)
    }

    /// `M(s)`: generators and relations shifted so that degree `d` of the
    /// result is degree `d + s` of `M`.
    pub fn twist(&self, s: i32, name: &str) -> Self {
        let cols = self.rels.columns().to_vec();
        let rels = GradedMap::from_columns(
            self.field(),
            self.nvars(),
            self.rels.source.shift(s),
            self.gens.shift(s),
            cols,
        )
        .expect("shifting preserves degrees");
        PresentedModule {
            name: name.to_string(),
            ring: self.ring.clone(),
            gens: rels.target.clone(),
            rels,
            cache: Mutex::new(HashMap::new()),
        }
    }
}

/// A degree-preserving map between presented modules, given by images of
/// the source generators in the target cover.
pub struct ModuleMap<'a, F: Field> {
    pub source: &'a PresentedModule<F>,
    pub target: &'a PresentedModule<F>,
    pub images: GradedMap<F>,
}

impl<'a, F: Field> ModuleMap<'a, F> {
    pub fn new(
        source: &'a PresentedModule<F>,
        target: &'a PresentedModule<F>,
        images: GradedMap<F>,
    ) -> Result<Self> {
        if images.source != source.gens || images.target != target.gens {
            return Err(Error::Incompatible(
                "map images do not match the generators".into(),
            ));
        }
        if !source.ring.maps_onto(&target.ring) {
            return Err(Error::Incompatible(
                "source ring does not map onto the target ring".into(),
            ));
        }
        Ok(ModuleMap {
            source,
            target,
            images,
        })
    }

    /// Matrix of the map at degree `d` in quotient coordinates (columns).
    pub fn strand(&self, d: i32) -> StrandSnapshot<F> {
        let sp = self.source.piece(d);
        let tp = self.target.piece(d);
        let one = self.source.field().one();
        let columns = (0..sp.dim())
            .map(|q| {
                let (g, b) = sp.locate(q);
                let m = self
                    .source
                    .ring
                    .piece(d - self.source.gens.twists[g])
                    .expect("nonempty block")
                    .basis_mono(b);
                self.target.image_of(d, self.images.col(g), &m, &one)
            })
            .collect();
        StrandSnapshot {
            d,
            source_dim: sp.dim(),
            target_dim: tp.dim(),
            columns,
        }
    }
}

/// A single internal degree of a map: its matrix over the coefficient field.
#[derive(Clone, Debug)]
pub struct StrandSnapshot<F: Field> {
    pub d: i32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub columns: Vec<SparseVec<F>>,
}

impl<F: Field> StrandSnapshot<F> {
    pub fn rank(&self, field: &F) -> usize {
        crate::linalg::rank_of(field, self.target_dim, &self.columns)
    }

    /// `self ∘ other` as matrices.
    pub fn compose(&self, field: &F, other: &StrandSnapshot<F>) -> Result<StrandSnapshot<F>> {
        if other.target_dim != self.source_dim || other.d != self.d {
            return Err(Error::Incompatible("strand shapes do not compose".into()));
        }
        let columns = other
            .columns
            .iter()
            .map(|x| crate::linalg::apply_columns(field, self.target_dim, &self.columns, x))
            .collect();
        Ok(StrandSnapshot {
            d: self.d,
            source_dim: other.source_dim,
            target_dim: self.target_dim,
            columns,
        })
    }
}
