//! Pinhole perspective camera.
//!
//! Image coordinates are in pixels with `x` to the right and `y` down; the
//! center of pixel `(i, j)` sits at `(i + 0.5, j + 0.5)`. Depth is the
//! view-space distance along the viewing direction.

use crate::math::{deg_to_rad, fabs, tan, Vec2, Vec3};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CameraError {
    #[error("near ({near}) must be positive and less than far ({far})")]
    DepthRange { near: f64, far: f64 },
    #[error("vertical field of view {0} is outside (0, 180) degrees")]
    FieldOfView(f64),
    #[error("image size {width}x{height} must be non-zero")]
    ImageSize { width: usize, height: usize },
    #[error("camera center coincides with the look-at point")]
    NoViewDirection,
    #[error("up vector is parallel to the view direction")]
    UpParallel,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Camera {
    center: Vec3,
    look_at: Vec3,
    up: Vec3,
    vertical_fov: f64,
    width: usize,
    height: usize,
    near: f64,
    far: f64,
    forward: Vec3,
    right: Vec3,
    true_up: Vec3,
    focal: f64,
}

impl Camera {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        center: Vec3,
        look_at: Vec3,
        up: Vec3,
        vertical_fov: f64,
        width: usize,
        height: usize,
        near: f64,
        far: f64,
    ) -> Result<Camera, CameraError> {
        if !(near > 0.0 && near < far) {
            return Err(CameraError::DepthRange { near, far });
        }
        if !(vertical_fov > 0.0 && vertical_fov < 180.0) {
            return Err(CameraError::FieldOfView(vertical_fov));
        }
        if width == 0 || height == 0 {
            return Err(CameraError::ImageSize { width, height });
        }
        let forward = (look_at - center).try_normalize().ok_or(CameraError::NoViewDirection)?;
        let up_n = up.try_normalize().ok_or(CameraError::UpParallel)?;
        if fabs(up_n.dot(forward)) > 1.0 - 1e-9 {
            return Err(CameraError::UpParallel);
        }
        let right = forward.cross(up_n).normalize();
        let true_up = right.cross(forward);
        let focal = 0.5 * height as f64 / tan(0.5 * deg_to_rad(vertical_fov));
        Ok(Camera {
            center,
            look_at,
            up,
            vertical_fov,
            width,
            height,
            near,
            far,
            forward,
            right,
            true_up,
            focal,
        })
    }

    /// Camera at `center` looking at `look_at`, `+y` up unless that is
    /// parallel to the view direction (then `+z`), near/far spanning
    /// `[1e-3, 1e4]`.
    pub fn looking_at(center: Vec3, look_at: Vec3, vertical_fov: f64, width: usize, height: usize) -> Result<Camera, CameraError> {
        let dir = (look_at - center).try_normalize().ok_or(CameraError::NoViewDirection)?;
        let up = if fabs(dir.y) > 0.999 { Vec3::Z } else { Vec3::Y };
        Camera::new(center, look_at, up, vertical_fov, width, height, 1e-3, 1e4)
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }

    pub fn look_at(&self) -> Vec3 {
        self.look_at
    }

    pub fn up(&self) -> Vec3 {
        self.up
    }

    pub fn vertical_fov(&self) -> f64 {
        self.vertical_fov
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn near(&self) -> f64 {
        self.near
    }

    pub fn far(&self) -> f64 {
        self.far
    }

    /// Unit viewing direction.
    pub fn forward(&self) -> Vec3 {
        self.forward
    }

    pub fn right(&self) -> Vec3 {
        self.right
    }

    pub fn true_up(&self) -> Vec3 {
        self.true_up
    }

    /// Focal length in pixels.
    pub fn focal(&self) -> f64 {
        self.focal
    }

    /// Same camera with a different image size (field of view unchanged).
    pub fn with_resolution(&self, width: usize, height: usize) -> Result<Camera, CameraError> {
        Camera::new(self.center, self.look_at, self.up, self.vertical_fov, width, height, self.near, self.far)
    }

    /// View-space coordinates `(x right, y up, z forward)`.
    pub fn to_view(&self, p: Vec3) -> Vec3 {
        let d = p - self.center;
        Vec3::new(d.dot(self.right), d.dot(self.true_up), d.dot(self.forward))
    }

    /// Pixel coordinates of a view-space point with `z > 0`.
    pub fn view_to_image(&self, v: Vec3) -> Vec2 {
        Vec2::new(
            0.5 * self.width as f64 + self.focal * v.x / v.z,
            0.5 * self.height as f64 - self.focal * v.y / v.z,
        )
    }

    /// Projects a world point to `(pixel position, depth)`; `None` when the
    /// point is not in front of the camera.
    pub fn project(&self, p: Vec3) -> Option<(Vec2, f64)> {
        let v = self.to_view(p);
        if v.z <= 1e-12 {
            return None;
        }
        Some((self.view_to_image(v), v.z))
    }

    /// Screen-space image of a tangent direction `d` at world point `p`
    /// (derivative of the projection), in pixels per unit of `d`.
    pub fn project_direction(&self, p: Vec3, d: Vec3) -> Option<Vec2> {
        let v = self.to_view(p);
        if v.z <= 1e-12 {
            return None;
        }
        let dv = Vec3::new(d.dot(self.right), d.dot(self.true_up), d.dot(self.forward));
        let inv = 1.0 / (v.z * v.z);
        Some(Vec2::new(
            self.focal * (dv.x * v.z - v.x * dv.z) * inv,
            -self.focal * (dv.y * v.z - v.y * dv.z) * inv,
        ))
    }

    /// Unit world-space direction of the ray through pixel position `px`.
    pub fn ray_direction(&self, px: Vec2) -> Vec3 {
        let x = (px.x - 0.5 * self.width as f64) / self.focal;
        let y = -(px.y - 0.5 * self.height as f64) / self.focal;
        (self.forward + self.right * x + self.true_up * y).normalize()
    }
}
