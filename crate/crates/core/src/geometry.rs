//! Box geometry: IoU overlap and the crop constructions used to cut
//! local/global action patches around a detection.

use crate::model::BBox;

/// Geometry errors.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("crop scale must be >= 1 and image size positive, got mu={mu} image={w}x{h}")]
    InvalidConfig { mu: f64, w: f64, h: f64 },
    #[error("box does not intersect the image")]
    EmptyClip,
}

/// Crop scale and image bounds for global crops and clipping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CropConfig {
    pub mu: f64,
    pub image_w: f64,
    pub image_h: f64,
}

impl CropConfig {
    pub fn new(mu: f64, image_w: f64, image_h: f64) -> Result<Self, GeometryError> {
        if !(mu >= 1.0 && mu.is_finite() && image_w > 0.0 && image_h > 0.0) {
            return Err(GeometryError::InvalidConfig {
                mu,
                w: image_w,
                h: image_h,
            });
        }
        Ok(CropConfig {
            mu,
            image_w,
            image_h,
        })
    }
}

/// Intersection-over-union of two boxes. Boxes that only touch along an
/// edge have zero intersection area and score 0.
pub fn iou(a: &BBox, b: &BBox) -> f64 {
    let iw = (a.right().min(b.right()) - a.x.max(b.x)).max(0.0);
    let ih = (a.bottom().min(b.bottom()) - a.y.max(b.y)).max(0.0);
    let inter = iw * ih;
    if inter <= 0.0 {
        return 0.0;
    }
    inter / (a.area() + b.area() - inter)
}

/// Smallest square sharing the box center whose side is the larger box
/// dimension. This is the tight local patch around one person.
pub fn square_local_crop(b: &BBox) -> BBox {
    let side = b.w.max(b.h);
    let (cx, cy) = b.center();
    BBox {
        x: cx - side / 2.0,
        y: cy - side / 2.0,
        w: side,
        h: side,
    }
}

/// Scales a local crop by `mu` about its center, giving the context patch.
/// The result may extend past the image and is clipped separately. A scale
/// of exactly 1 returns the box unchanged, bit for bit.
pub fn global_crop(local: &BBox, config: &CropConfig) -> BBox {
    if config.mu == 1.0 {
        return *local;
    }
    let (cx, cy) = local.center();
    let w = local.w * config.mu;
    let h = local.h * config.mu;
    BBox {
        x: cx - w / 2.0,
        y: cy - h / 2.0,
        w,
        h,
    }
}

/// Intersects a box with the image rectangle. Errors when the intersection
/// is empty (the box lies entirely outside, or degenerates to a line).
pub fn clip_to_image(b: &BBox, config: &CropConfig) -> Result<BBox, GeometryError> {
    let x0 = b.x.max(0.0);
    let y0 = b.y.max(0.0);
    let x1 = b.right().min(config.image_w);
    let y1 = b.bottom().min(config.image_h);
    if x1 <= x0 || y1 <= y0 {
        return Err(GeometryError::EmptyClip);
    }
    Ok(BBox {
        x: x0,
        y: y0,
        w: x1 - x0,
        h: y1 - y0,
    })
}
