#include <algorithm>
#include <cmath>

#include "viz/errors.hpp"
#include "viz/session.hpp"

namespace viz {

namespace {

bool isNull(const PointerEvent& ev) { return ev.dx == 0.0 && ev.dy == 0.0; }

Camera orbitCamera(const Camera& cam, double dx, double dy) {
  Camera out = cam;
  const Vec3 up = normalized(cam.viewUp);
  Vec3 offset = cam.position - cam.focalPoint;
  if (dx != 0.0) offset = Quat::fromAxisAngle(up, -dx * kPi).rotate(offset);
  if (dy != 0.0) {
    const double r = norm(offset);
    const double elevation = std::asin(std::clamp(dot(offset, up) / r, -1.0, 1.0));
    const double limit = degToRad(kMaxElevationDegrees);
    const double target = std::clamp(elevation + dy * kPi, -limit, limit);
    const Vec3 axis = normalized(cross(offset, up));
    if (norm(axis) > 0.0) offset = Quat::fromAxisAngle(axis, target - elevation).rotate(offset);
  }
  out.position = cam.focalPoint + offset;
  return out;
}

/// Incremental object rotation for a drag, in camera-relative axes.
Quat dragRotation(const Camera& cam, double dx, double dy) {
  return (Quat::fromAxisAngle(cam.up(), dx * kPi) * Quat::fromAxisAngle(cam.right(), -dy * kPi)).normalized();
}

void moveObject(View& v, const Camera& cam, const PointerEvent& ev, const Quat& q) {
  const double d = cam.distance();
  switch (ev.kind) {
    case PointerEvent::Kind::RotateDrag:
      v.objectRotation = (q * v.objectRotation).normalized();
      break;
    case PointerEvent::Kind::PanDrag:
      v.objectTranslation += (cam.right() * ev.dx + cam.up() * ev.dy) * d;
      break;
    case PointerEvent::Kind::ZoomDrag:
      v.objectTranslation += cam.forward() * ((std::exp(ev.dy) - 1.0) * d);
      break;
  }
}

}  // namespace

const char* pointerKindName(PointerEvent::Kind k) {
  switch (k) {
    case PointerEvent::Kind::RotateDrag: return "rotate";
    case PointerEvent::Kind::PanDrag: return "pan";
    case PointerEvent::Kind::ZoomDrag: return "zoom";
  }
  return "?";
}

std::optional<PointerEvent::Kind> pointerKindFromName(const std::string& name) {
  if (name == "rotate" || name == "rotateDrag") return PointerEvent::Kind::RotateDrag;
  if (name == "pan" || name == "panDrag") return PointerEvent::Kind::PanDrag;
  if (name == "zoom" || name == "zoomDrag") return PointerEvent::Kind::ZoomDrag;
  return std::nullopt;
}

Session handlePointer(const Session& session, const PointerEvent& ev) {
  if (!std::isfinite(ev.dx) || !std::isfinite(ev.dy)) throw ArgumentError("pointer deltas must be finite");
  if (session.mode == Mode::Object) {
    if (!ev.targetView) throw ArgumentError("object mode needs a target view");
    if (!session.findView(*ev.targetView)) throw ArgumentError("unknown view: " + std::to_string(*ev.targetView));
  }
  if (isNull(ev)) return session;

  Session out = session;
  const Camera& cam = session.camera;
  switch (session.mode) {
    case Mode::Camera: {
      out.cameraAuto = false;
      switch (ev.kind) {
        case PointerEvent::Kind::RotateDrag:
          out.camera = orbitCamera(cam, ev.dx, ev.dy);
          break;
        case PointerEvent::Kind::PanDrag: {
          const Vec3 shift = (cam.right() * -ev.dx + cam.up() * -ev.dy) * cam.distance();
          out.camera.position += shift;
          out.camera.focalPoint += shift;
          break;
        }
        case PointerEvent::Kind::ZoomDrag:
          out.camera.position = cam.focalPoint + (cam.position - cam.focalPoint) * std::exp(ev.dy);
          break;
      }
      break;
    }
    case Mode::Object:
    case Mode::Sync: {
      const Quat q = dragRotation(cam, ev.dx, ev.dy);
      for (auto& v : out.views) {
        if (session.mode == Mode::Object && v.id != *ev.targetView) continue;
        moveObject(v, cam, ev, q);
      }
      break;
    }
  }
  return out;
}

std::vector<PlacedView> worldAssembly(const Session& session) {
  std::vector<const View*> ordered;
  for (const auto& v : session.views) ordered.push_back(&v);
  std::sort(ordered.begin(), ordered.end(), [](const View* a, const View* b) { return a->id < b->id; });

  std::vector<PlacedView> out;
  for (const View* v : ordered) {
    const ScalarField field = derivedField(session, *v);
    PlacedView p;
    p.viewId = v->id;
    p.placement = v->placement();
    const auto corners = boundingBox(field).corners();
    for (int i = 0; i < 8; ++i) p.volumeCorners[i] = p.placement.apply(corners[i]);
    for (double level : v->isoLevels) p.isoMeshes.push_back(transformMesh(marchingCubes(field, level), p.placement));
    for (const auto& plane : v->cutPlanes) {
      const SliceImage s = extractCutPlane(field, plane, 1.0);
      const Vec3 u = s.uStep * static_cast<double>(s.width - 1);
      const Vec3 w = s.vStep * static_cast<double>(s.height - 1);
      p.cutFrames.push_back({p.placement.apply(s.origin), p.placement.applyVector(u), p.placement.applyVector(w)});
    }
    out.push_back(std::move(p));
  }
  return out;
}

AnimResult animate(const Session& session, const AnimSpec& spec) {
  if (spec.frames < 1) throw ArgumentError("animation needs at least one frame");
  if (!std::isfinite(spec.degrees)) throw ArgumentError("animation angle must be finite");
  if (spec.axis < 0 || spec.axis > 2) throw RangeError("animation axis must be x, y or z");
  Vec3 axis;
  axis[spec.axis] = 1.0;
  const bool orbit = spec.kind == AnimSpec::Kind::Orbit || session.mode == Mode::Camera;

  AnimResult result;
  Session current = session;
  for (std::int64_t k = 1; k <= spec.frames; ++k) {
    const double angle = degToRad(spec.degrees) * static_cast<double>(k) / static_cast<double>(spec.frames);
    const Quat q = Quat::fromAxisAngle(axis, angle);
    current = session;
    if (orbit) {
      if (spec.degrees != 0.0) {
        current.cameraAuto = false;
        current.camera.position = session.camera.focalPoint + q.rotate(session.camera.position - session.camera.focalPoint);
        current.camera.viewUp = q.rotate(session.camera.viewUp);
      }
    } else if (spec.degrees != 0.0) {
      for (auto& v : current.views) v.objectRotation = (q * v.objectRotation).normalized();
    }
    FrameState f;
    f.frame = k;
    f.camera = current.camera;
    for (const auto& v : current.views) f.transforms.push_back({v.id, v.objectRotation, v.objectTranslation});
    result.frames.push_back(std::move(f));
  }
  result.session = std::move(current);
  return result;
}

Session applyFrame(const Session& session, const FrameState& frame) {
  Session out = session;
  out.camera = frame.camera;
  for (const auto& t : frame.transforms) {
    for (auto& v : out.views) {
      if (v.id == t.viewId) {
        v.objectRotation = t.rotation;
        v.objectTranslation = t.translation;
      }
    }
  }
  return out;
}

}  // namespace viz
