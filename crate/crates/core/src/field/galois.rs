//! Automorphisms of an extension over its immediate base.
//!
//! An automorphism is determined by the image of the generator, which must
//! be a root of the modulus. Composition `g∘h` applies `h` first.

use super::{poly, Elem, Field};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldAut {
    field: Field,
    generator_image: Elem,
}

impl FieldAut {
    /// Checks that `image` is a root of the modulus of `field`.
    pub fn new(field: &Field, image: Elem) -> Result<Self> {
        let ext = field.as_extension().ok_or(Error::NotExtension)?;
        if !field.contains(&image) {
            return Err(Error::FieldMismatch);
        }
        if !field.is_zero(&poly::eval_over(field, ext.modulus(), &image)) {
            return Err(Error::HintNotRoot(field.format(&image)));
        }
        Ok(FieldAut {
            field: field.clone(),
            generator_image: image,
        })
    }

    pub fn identity(field: &Field) -> Self {
        FieldAut {
            field: field.clone(),
            generator_image: field.generator(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn generator_image(&self) -> &Elem {
        &self.generator_image
    }

    pub fn is_identity(&self) -> bool {
        self.generator_image == self.field.generator()
    }

    /// Substitutes the generator image into the representative of `x`;
    /// base coefficients are left alone.
    pub fn apply(&self, x: &Elem) -> Elem {
        poly::eval_over(&self.field, self.field.coeffs(x), &self.generator_image)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &FieldAut) -> FieldAut {
        FieldAut {
            field: self.field.clone(),
            generator_image: self.apply(&other.generator_image),
        }
    }
}

/// A finite group of automorphisms with its composition table.
#[derive(Clone, Debug)]
pub struct GaloisGroup {
    field: Field,
    elements: Vec<FieldAut>,
    /// `table[i][j]` is the index of `elements[i] ∘ elements[j]`.
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    is_galois: bool,
}

impl GaloisGroup {
    /// All automorphisms of `field` over its immediate base.
    ///
    /// Finite fields: exhaustive root search, returned in the order
    /// `id, Frob, Frob², …` where `Frob(a) = a^q` and `q` is the size of the
    /// base. Infinite bases: the group generated by the hinted generator
    /// images, in discovery order.
    pub fn automorphisms(field: &Field, hints: &[Elem]) -> Result<Self> {
        let ext = field.as_extension().ok_or(Error::NotExtension)?;
        let hint_auts = hints
            .iter()
            .map(|h| FieldAut::new(field, h.clone()))
            .collect::<Result<Vec<_>>>()?;
        let elements = if field.is_finite() {
            let roots: Vec<Elem> = field
                .elements()
                .into_iter()
                .filter(|r| field.is_zero(&poly::eval_over(field, ext.modulus(), r)))
                .collect();
            let q = ext.base().size().expect("finite base");
            let gen = field.generator();
            let mut frob_powers = vec![FieldAut::identity(field)];
            let mut img = field.pow(&gen, q);
            while img != gen {
                frob_powers.push(FieldAut {
                    field: field.clone(),
                    generator_image: img.clone(),
                });
                img = field.pow(&img, q);
            }
            if frob_powers.len() != roots.len()
                || roots
                    .iter()
                    .any(|r| !frob_powers.iter().any(|g| &g.generator_image == r))
            {
                return Err(Error::Internal(
                    "Frobenius powers do not exhaust the roots of the modulus".into(),
                ));
            }
            frob_powers
        } else {
            closure(field, &hint_auts, ext.degree())?
        };
        Self::from_elements(field, elements)
    }

    fn from_elements(field: &Field, elements: Vec<FieldAut>) -> Result<Self> {
        let index_of = |a: &FieldAut| elements.iter().position(|b| b == a);
        let mut table = vec![vec![0; elements.len()]; elements.len()];
        for (i, g) in elements.iter().enumerate() {
            for (j, h) in elements.iter().enumerate() {
                table[i][j] = index_of(&g.compose(h)).ok_or(Error::NotClosed)?;
            }
        }
        let id = index_of(&FieldAut::identity(field)).ok_or(Error::NotClosed)?;
        let inverse = (0..elements.len())
            .map(|i| (0..elements.len()).find(|&j| table[i][j] == id).ok_or(Error::NotClosed))
            .collect::<Result<Vec<_>>>()?;
        let n = elements.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::Internal("composition is not associative".into()));
                    }
                }
            }
        }
        let is_galois = n == field.degree();
        Ok(GaloisGroup {
            field: field.clone(),
            elements,
            table,
            inverse,
            is_galois,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn base(&self) -> &Field {
        self.field.base().expect("extension field")
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[FieldAut] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &FieldAut {
        &self.elements[i]
    }

    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn compose(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn composition_table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn is_galois(&self) -> bool {
        self.is_galois
    }

    pub fn index_of(&self, g: &FieldAut) -> Option<usize> {
        self.elements.iter().position(|h| h == g)
    }

    pub fn require_galois(&self) -> Result<()> {
        if self.is_galois {
            Ok(())
        } else {
            Err(Error::NotGalois {
                order: self.len(),
                degree: self.field.degree(),
            })
        }
    }

    /// Maps a `G`-fixed element to the base field.
    pub fn coerce_down(&self, x: &Elem) -> Result<Elem> {
        if let Some(g) = self.elements.iter().position(|g| &g.apply(x) != x) {
            return Err(Error::NotFixed { g });
        }
        self.field.constant_term(x).ok_or(Error::NotConstant)
    }

    /// Whether `x` is fixed by every element.
    pub fn is_fixed(&self, x: &Elem) -> bool {
        self.elements.iter().all(|g| &g.apply(x) == x)
    }

    /// Display name of an element: its generator image.
    pub fn name(&self, g: usize) -> String {
        self.field.format(&self.elements[g].generator_image)
    }
}

fn closure(field: &Field, gens: &[FieldAut], degree: usize) -> Result<Vec<FieldAut>> {
    let mut elements = vec![FieldAut::identity(field)];
    let mut frontier = 0;
    for g in gens {
        if !elements.contains(g) {
            elements.push(g.clone());
        }
    }
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        for g in gens {
            let next = g.compose(&current);
            if !elements.contains(&next) {
                if elements.len() == degree {
                    return Err(Error::NotClosed);
                }
                elements.push(next);
            }
        }
        frontier += 1;
    }
    Ok(elements)
}

#[cfg(test)]
mod tests {
    use super::super::{finite_extension, gaussian_rationals, rational_extension};
    use super::*;

    #[test]
    fn f4_frobenius() {
        let f4 = finite_extension(2, &[1, 1, 1], "w").unwrap();
        let g = GaloisGroup::automorphisms(&f4, &[]).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.is_galois());
        let w = f4.generator();
        let w2 = f4.mul(&w, &w);
        assert_eq!(g.get(1).apply(&w), w2);
        assert_eq!(w2, f4.add(&w, &f4.one()));
        assert_eq!(g.compose(1, 1), 0);
    }

    #[test]
    fn gaussian_conjugation() {
        let qi = gaussian_rationals();
        let minus_i = qi.parse("-1*i").unwrap();
        let g = GaloisGroup::automorphisms(&qi, &[minus_i]).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.is_galois());
        let z = qi.parse("3+2*i").unwrap();
        assert_eq!(qi.format(&g.get(1).apply(&z)), "3-2*i");
        assert_eq!(g.get(0).apply(&z), z);
        assert_eq!(g.compose(1, 1), 0);
        assert_eq!(g.coerce_down(&qi.from_i64(5)).unwrap(), Field::rationals().from_i64(5));
        assert!(matches!(g.coerce_down(&qi.generator()), Err(Error::NotFixed { g: 1 })));
    }

    #[test]
    fn bad_hint() {
        let qi = gaussian_rationals();
        let two = qi.from_i64(2);
        assert!(matches!(
            GaloisGroup::automorphisms(&qi, &[two]),
            Err(Error::HintNotRoot(_))
        ));
    }

    #[test]
    fn cube_root_of_two_has_trivial_group() {
        let k = rational_extension(&[-2, 0, 0, 1], "a", false).unwrap();
        let g = GaloisGroup::automorphisms(&k, &[]).unwrap();
        assert_eq!(g.len(), 1);
        assert!(!g.is_galois());
        assert!(g.require_galois().is_err());
    }
}
