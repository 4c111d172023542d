"""DSP-WENO inference: feature maps, the 5-5-5-5-5 MLP, and persistence.

The learned reconstruction picks its weight perturbation (C1, C2) as a
convex combination of the stencil's feasible vertices, with the combination
weights produced by a small MLP from five scale- and negation-invariant
stencil features. The sign property therefore holds for every parameter
setting; training only moves the choice around inside the feasible region.

Layout of the network: three hidden layers of five neurons with max(0, x)
activation, a linear output layer, and a softmax head, for 120 parameters
in total. Inference is pure; batched evaluation over flat arrays of
stencils is the intended mode, with a scalar API mirroring it for
inspection and tests.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .reconstruct import (
    ReconPair,
    Stencil4,
    WenoPerturbation,
    _apply_degenerate,
    _weno_values,
    stencil_terms,
    vertex_sets_from_terms,
)

WEIGHTS_FORMAT = 1
LAYER_SIZES = (5, 5, 5, 5, 5)
DEFAULT_WEIGHTS_RESOURCE = "dsp_weno_weights.json"


class DegenerateCentralJump(ValueError):
    """The central stencil difference is zero; features are undefined."""


class WeightsFormatError(ValueError):
    """Weight file is malformed, mis-dimensioned, or of unknown version."""


@dataclass(frozen=True)
class ScaledStencil:
    z_m1: float
    z_0: float
    z_p1: float
    z_p2: float


@dataclass(frozen=True)
class SFeatures:
    theta_minus: float
    theta_plus: float
    aj_m: float
    aj_0: float
    aj_p: float


@dataclass(frozen=True)
class NetInput:
    """Network input: tanh-squashed jump ratios plus scaled absolute jumps."""

    tanh_theta_minus: float
    tanh_theta_plus: float
    aj_m: float
    aj_0: float
    aj_p: float

    def as_array(self) -> np.ndarray:
        return np.array([self.tanh_theta_minus, self.tanh_theta_plus,
                         self.aj_m, self.aj_0, self.aj_p])


@dataclass(frozen=True)
class ConvexWeights:
    alpha: np.ndarray


class MlpParams:
    """Immutable parameter set: four (weight, bias) dense layers."""

    def __init__(self, layers):
        layers = [(np.array(w, dtype=float), np.array(b, dtype=float))
                  for w, b in layers]
        if len(layers) != len(LAYER_SIZES) - 1:
            raise WeightsFormatError(f"expected {len(LAYER_SIZES) - 1} layers, "
                                     f"got {len(layers)}")
        for k, (w, b) in enumerate(layers):
            want = (LAYER_SIZES[k + 1], LAYER_SIZES[k])
            if w.shape != want:
                raise WeightsFormatError(f"layer {k}: weight shape {w.shape}, "
                                         f"expected {want}")
            if b.shape != (LAYER_SIZES[k + 1],):
                raise WeightsFormatError(f"layer {k}: bias shape {b.shape}, "
                                         f"expected ({LAYER_SIZES[k + 1]},)")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise WeightsFormatError(f"layer {k}: non-finite parameters")
            w.flags.writeable = False
            b.flags.writeable = False
        self.layers = tuple(layers)
        self.meta: dict = {}

    @property
    def n_params(self) -> int:
        return sum(w.size + b.size for w, b in self.layers)

    def __eq__(self, other):
        if not isinstance(other, MlpParams):
            return NotImplemented
        return all(np.array_equal(w1, w2) and np.array_equal(b1, b2)
                   for (w1, b1), (w2, b2) in zip(self.layers, other.layers))

    @classmethod
    def zeros(cls) -> "MlpParams":
        return cls([(np.zeros((o, i)), np.zeros(o))
                    for i, o in zip(LAYER_SIZES[:-1], LAYER_SIZES[1:])])


# ---------------------------------------------------------------------------
# feature maps


def scale_stencil(s: Stencil4) -> ScaledStencil:
    """Divide the stencil by max(1, max |z|) so every entry lands in [-1, 1]."""
    vals = s.as_array()
    scaled = vals / max(1.0, float(np.max(np.abs(vals))))
    return ScaledStencil(*scaled)


def features(s: Stencil4) -> tuple[SFeatures, NetInput]:
    """Jump-ratio and scaled-jump features of one stencil.

    The ratios come from the raw stencil (they are invariant to the
    scaling); the absolute jumps from the scaled one. Raises
    DegenerateCentralJump when the central difference is zero.
    """
    terms = stencil_terms(s.z_m1, s.z_0, s.z_p1, s.z_p2)
    if bool(terms["degenerate"]):
        raise DegenerateCentralJump("central stencil difference is zero")
    tm = float(terms["theta_minus"])
    tp = float(terms["theta_plus"])
    aj = (float(terms["aj_m"]), float(terms["aj_0"]), float(terms["aj_p"]))
    return (SFeatures(tm, tp, *aj),
            NetInput(math.tanh(tm), math.tanh(tp), *aj))


def features_from_terms(terms) -> np.ndarray:
    """Batched network input, shape (m, 5); degenerate rows are placeholders."""
    return np.stack([np.tanh(terms["theta_minus"]),
                     np.tanh(terms["theta_plus"]),
                     terms["aj_m"], terms["aj_0"], terms["aj_p"]], axis=-1)


# ---------------------------------------------------------------------------
# inference


def mlp_hidden(params: MlpParams, x: np.ndarray) -> list[np.ndarray]:
    """Pre-softmax forward pass; returns per-layer activations.

    x has shape (..., 5); the returned list holds the input followed by the
    three rectified hidden activations and the linear output, which the
    training backward pass consumes.
    """
    acts = [x]
    h = x
    for k, (w, b) in enumerate(params.layers):
        h = h @ w.T + b
        if k < len(params.layers) - 1:
            h = np.maximum(h, 0.0)
        acts.append(h)
    return acts

def softmax(y: np.ndarray) -> np.ndarray:
    e = np.exp(y - np.max(y, axis=-1, keepdims=True))
    return e / np.sum(e, axis=-1, keepdims=True)


def mlp_forward_batch(params: MlpParams, x: np.ndarray) -> np.ndarray:
    return softmax(mlp_hidden(params, x)[-1])


def mlp_forward(params: MlpParams, x: NetInput) -> ConvexWeights:
    return ConvexWeights(mlp_forward_batch(params, x.as_array()))


def dsp_weno_perturbation(params: MlpParams, s: Stencil4) -> WenoPerturbation:
    """Convex combination of the stencil's feasible vertices."""
    terms = stencil_terms(s.z_m1, s.z_0, s.z_p1, s.z_p2)
    if bool(terms["degenerate"]):
        raise DegenerateCentralJump("central stencil difference is zero")
    alpha = mlp_forward_batch(params, features_from_terms(terms))
    c = np.einsum("s,sk->k", alpha, vertex_sets_from_terms(terms)[0])
    return WenoPerturbation(float(c[0]), float(c[1]))


def dsp_weno_reconstruct(params: MlpParams, s: Stencil4) -> ReconPair:
    """Learned reconstruction; a zero central jump returns (z_0, z_p1)."""
    terms = stencil_terms(s.z_m1, s.z_0, s.z_p1, s.z_p2)
    if bool(terms["degenerate"]):
        return ReconPair(s.z_0, s.z_p1)
    c = dsp_weno_perturbation(params, s)
    zl, zr = _weno_values(s.z_m1, s.z_0, s.z_p1, s.z_p2, c.c1, c.c2)
    return ReconPair(float(zl), float(zr))


def dsp_weno_interface_values(zm1, z0, zp1, zp2, params: MlpParams):
    """Vectorized learned reconstruction; returns (z_minus, z_plus).

    Accepts stencil component arrays of any common shape; the vertex
    machinery is flat, so inputs are raveled and the outputs restored.
    """
    zm1, z0, zp1, zp2 = np.broadcast_arrays(*(np.asarray(a, dtype=float)
                                              for a in (zm1, z0, zp1, zp2)))
    shape = z0.shape
    terms = stencil_terms(zm1.ravel(), z0.ravel(), zp1.ravel(), zp2.ravel())
    alpha = mlp_forward_batch(params, features_from_terms(terms))
    V = vertex_sets_from_terms(terms)
    c = np.einsum("ms,msk->mk", alpha, V)
    zl, zr = _weno_values(*terms["z"], c[..., 0], c[..., 1])
    zl, zr = _apply_degenerate(terms, zl, zr)
    return zl.reshape(shape), zr.reshape(shape)


def make_kernel(params: MlpParams):
    """Bind parameters into a 4-point reconstruction kernel for the solver."""
    def kernel(zm1, z0, zp1, zp2):
        return dsp_weno_interface_values(zm1, z0, zp1, zp2, params)
    return kernel


# ---------------------------------------------------------------------------
# persistence


def save_params(params: MlpParams, path, meta: dict | None = None) -> None:
    doc = {
        "format": WEIGHTS_FORMAT,
        "layers": [{"rows": w.shape[0], "cols": w.shape[1],
                    "w": [float(v) for v in w.ravel()],
                    "b": [float(v) for v in b]}
                   for w, b in params.layers],
        "meta": dict(meta if meta is not None else params.meta),
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def _params_from_doc(doc) -> MlpParams:
    if not isinstance(doc, dict) or "format" not in doc:
        raise WeightsFormatError("missing format version field")
    if doc["format"] != WEIGHTS_FORMAT:
        raise WeightsFormatError(f"unknown weights format {doc['format']!r}")
    layers_doc = doc.get("layers")
    if not isinstance(layers_doc, list):
        raise WeightsFormatError("missing layers list")
    layers = []
    for k, ld in enumerate(layers_doc):
        try:
            rows, cols = int(ld["rows"]), int(ld["cols"])
            w = np.array(ld["w"], dtype=float)
            b = np.array(ld["b"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise WeightsFormatError(f"layer {k}: malformed entry") from exc
        if w.size != rows * cols:
            raise WeightsFormatError(f"layer {k}: {w.size} weights for "
                                     f"declared {rows}x{cols}")
        layers.append((w.reshape(rows, cols), b))
    params = MlpParams(layers)
    meta = doc.get("meta", {})
    if isinstance(meta, dict):
        params.meta = meta
    return params


def load_params(path) -> MlpParams:
    with open(path, "r", encoding="utf-8") as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as exc:
            raise WeightsFormatError(f"not valid JSON: {exc}") from exc
    return _params_from_doc(doc)


def default_params() -> MlpParams:
    """The pretrained parameter set shipped with the package."""
    ref = resources.files("tecno").joinpath("data") \
                   .joinpath(DEFAULT_WEIGHTS_RESOURCE)
    with ref.open("r", encoding="utf-8") as f:
        return _params_from_doc(json.load(f))
