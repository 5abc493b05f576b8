//! Category priors: reference extents, canonical up direction, and the
//! floor / wall / supported class memberships.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::math::Vec3;
use crate::scene::{Result, SceneError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryPrior {
    /// Reference full extents in meters.
    pub ref_scale: Vec3,
    /// Object-frame up direction, unit norm.
    pub canonical_up: Vec3,
    #[serde(default)]
    pub is_floor_class: bool,
    #[serde(default)]
    pub is_wall_class: bool,
    #[serde(default)]
    pub is_supported_class: bool,
}

impl CategoryPrior {
    fn validate(&self, category: &str) -> Result<()> {
        if self.ref_scale.x <= 0.0 || self.ref_scale.y <= 0.0 || self.ref_scale.z <= 0.0 {
            return Err(SceneError::Validation {
                object: category.to_string(),
                rule: "prior ref_scale must be positive".to_string(),
            });
        }
        if (self.canonical_up.norm() - 1.0).abs() > 1e-6 {
            return Err(SceneError::Validation {
                object: category.to_string(),
                rule: "prior canonical_up must be unit norm".to_string(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PriorRegistry {
    pub categories: BTreeMap<String, CategoryPrior>,
}

impl PriorRegistry {
    pub fn get(&self, category: &str) -> Option<&CategoryPrior> {
        self.categories.get(category)
    }

    pub fn insert(&mut self, category: impl Into<String>, prior: CategoryPrior) {
        self.categories.insert(category.into(), prior);
    }

    /// Load a priors file (JSON map category -> prior) and merge it over
    /// `self`, replacing priors for categories that appear in the file.
    pub fn merge_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| SceneError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let loaded: BTreeMap<String, CategoryPrior> =
            serde_json::from_str(&text).map_err(|e| SceneError::Parse {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
        for (category, prior) in loaded {
            prior.validate(&category)?;
            self.categories.insert(category, prior);
        }
        Ok(())
    }

    /// Bundled default table of common indoor categories.
    pub fn default_indoor() -> Self {
        let up = Vec3::new(0.0, 1.0, 0.0);
        let mut reg = PriorRegistry::default();
        let floor = |e: Vec3| CategoryPrior {
            ref_scale: e,
            canonical_up: up,
            is_floor_class: true,
            is_wall_class: false,
            is_supported_class: false,
        };
        let wall = |e: Vec3| CategoryPrior {
            ref_scale: e,
            canonical_up: up,
            is_floor_class: true,
            is_wall_class: true,
            is_supported_class: false,
        };
        let supported = |e: Vec3| CategoryPrior {
            ref_scale: e,
            canonical_up: up,
            is_floor_class: false,
            is_wall_class: false,
            is_supported_class: true,
        };
        reg.insert("bed", floor(Vec3::new(1.6, 0.5, 2.0)));
        reg.insert("sofa", floor(Vec3::new(1.8, 0.8, 0.9)));
        reg.insert("table", floor(Vec3::new(1.2, 0.75, 0.8)));
        reg.insert("desk", floor(Vec3::new(1.1, 0.75, 0.6)));
        reg.insert("chair", floor(Vec3::new(0.5, 0.9, 0.5)));
        reg.insert("nightstand", floor(Vec3::new(0.5, 0.55, 0.4)));
        reg.insert("plant", floor(Vec3::new(0.4, 0.9, 0.4)));
        reg.insert("box", floor(Vec3::new(0.5, 0.5, 0.5)));
        reg.insert("partition", floor(Vec3::new(1.9, 1.2, 0.12)));
        reg.insert("wardrobe", wall(Vec3::new(1.0, 2.0, 0.6)));
        reg.insert("bookshelf", wall(Vec3::new(0.8, 1.8, 0.3)));
        reg.insert("cabinet", wall(Vec3::new(0.9, 1.2, 0.45)));
        reg.insert("tv_stand", wall(Vec3::new(1.4, 0.5, 0.4)));
        reg.insert("lamp", supported(Vec3::new(0.3, 0.5, 0.3)));
        reg.insert("vase", supported(Vec3::new(0.2, 0.35, 0.2)));
        reg.insert("monitor", supported(Vec3::new(0.6, 0.4, 0.2)));
        reg
    }
}
