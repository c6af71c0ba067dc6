"""Country layout on a circle and barycentric recipe placement.

Countries are arranged by the spectral properties of their pairwise
similarity: with W the thresholded cosine matrix and D its row-sum
diagonal, the eigenvectors of D^-1 W (computed through the symmetric
similarity transform D^-1/2 W D^-1/2) give coordinates that are
normalized onto the unit circle. A recipe is then drawn inside the
circle at the probability-weighted barycenter of the country positions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Sequence

import numpy as np

from .embeddings import EmbeddingSpace
from .errors import DataError, NumericalError

_EIGEN_UNIT_TOL = 1e-8
_CONST_VECTOR_TOL = 1e-6


@dataclass(frozen=True)
class CountrySimilarityMatrix:
    """Non-negative symmetric country affinities with zero diagonal."""

    countries: tuple
    weights: np.ndarray

    def __post_init__(self):
        n = len(self.countries)
        if self.weights.shape != (n, n):
            raise DataError("weight matrix shape does not match country list")
        if not np.all(np.isfinite(self.weights)):
            raise NumericalError("country similarity matrix has non-finite entries")
        if np.any(self.weights < 0):
            raise DataError("country similarities must be non-negative")
        if not np.allclose(self.weights, self.weights.T, atol=1e-12):
            raise DataError("country similarity matrix must be symmetric")
        if np.any(np.diag(self.weights) != 0):
            raise DataError("country similarity matrix must have a zero diagonal")

    @property
    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)


def country_similarity(space: EmbeddingSpace) -> CountrySimilarityMatrix:
    """W_ij = max(0, cosine(country_i, country_j)), W_ii = 0."""
    countries = space.vocab.countries
    if len(countries) < 3:
        raise DataError("need at least three countries for a circle layout")
    vecs = space.input_vectors[space.country_offset :].astype(np.float64)
    norms = np.linalg.norm(vecs, axis=1)
    if np.any(norms == 0.0):
        bad = countries[int(np.flatnonzero(norms == 0.0)[0])]
        raise DataError(f"country {bad!r} has a zero embedding vector")
    units = vecs / norms[:, None]
    cos = units @ units.T
    weights = np.maximum(cos, 0.0)
    np.fill_diagonal(weights, 0.0)
    return CountrySimilarityMatrix(countries=tuple(countries), weights=weights)


def _check_connected(weights: np.ndarray) -> None:
    n = weights.shape[0]
    seen = np.zeros(n, dtype=bool)
    queue = deque([0])
    seen[0] = True
    while queue:
        i = queue.popleft()
        for j in np.flatnonzero(weights[i] > 0):
            if not seen[j]:
                seen[j] = True
                queue.append(int(j))
    if not seen.all():
        missing = int(np.flatnonzero(~seen)[0])
        raise DataError(
            f"similarity graph is disconnected (component without node {missing})"
        )


@dataclass(frozen=True)
class CircleLayout:
    """Unit-circle positions per country plus the spectrum they came from."""

    countries: tuple
    positions: np.ndarray
    eigenvalues: np.ndarray
    mode: str

    def position(self, country: str) -> np.ndarray:
        try:
            return self.positions[self.countries.index(country)]
        except ValueError:
            raise DataError(f"country {country!r} is not in the layout") from None

    def as_mapping(self) -> Dict[str, tuple]:
        return {c: (float(x), float(y))
                for c, (x, y) in zip(self.countries, self.positions)}


def spectral_circle_layout(matrix: CountrySimilarityMatrix,
                           mode: str = "largest") -> CircleLayout:
    """Coordinates from the second and third eigenvectors of D^-1 W.

    mode picks which end of the spectrum supplies them: "largest" takes the
    eigenvectors of the second- and third-largest eigenvalues (the smooth
    ones that place similar countries together), "smallest" the two
    smallest. Positions are pushed onto the unit circle; the trivial
    eigenpair (eigenvalue 1, constant eigenvector) is verified, not used.
    """
    if mode not in ("largest", "smallest"):
        raise DataError(f"unknown layout mode: {mode!r}")
    _check_connected(matrix.weights)
    d = matrix.degrees
    if np.any(d <= 0):
        bad = matrix.countries[int(np.flatnonzero(d <= 0)[0])]
        raise DataError(f"country {bad!r} has zero total similarity")
    d_isqrt = 1.0 / np.sqrt(d)
    sym = d_isqrt[:, None] * matrix.weights * d_isqrt[None, :]
    sym = (sym + sym.T) / 2.0
    eigenvalues, sym_vectors = np.linalg.eigh(sym)
    # eigh returns ascending order; D^-1 W shares eigenvalues with sym and
    # its eigenvectors are D^-1/2 times the symmetric ones.
    vectors = d_isqrt[:, None] * sym_vectors
    top = eigenvalues[-1]
    if abs(top - 1.0) > _EIGEN_UNIT_TOL:
        raise NumericalError(f"leading eigenvalue is {top!r}, expected 1")
    lead = vectors[:, -1]
    if np.max(np.abs(lead - lead.mean())) > _CONST_VECTOR_TOL * max(1.0, abs(lead.mean())):
        raise NumericalError("leading eigenvector of D^-1 W is not constant")
    if mode == "largest":
        idx = (len(eigenvalues) - 2, len(eigenvalues) - 3)
    else:
        idx = (0, 1)
    coords = np.stack([_fix_sign(vectors[:, i]) for i in idx], axis=1)
    radii = np.linalg.norm(coords, axis=1)
    if np.any(radii == 0.0):
        bad = matrix.countries[int(np.flatnonzero(radii == 0.0)[0])]
        raise NumericalError(f"country {bad!r} landed on the origin")
    positions = coords / radii[:, None]
    rounded = {tuple(np.round(p, 9)) for p in positions}
    if len(rounded) < 3:
        raise NumericalError("layout collapsed to fewer than three distinct positions")
    return CircleLayout(
        countries=matrix.countries,
        positions=positions,
        eigenvalues=eigenvalues[::-1].copy(),
        mode=mode,
    )


def _fix_sign(v: np.ndarray) -> np.ndarray:
    """Flip an eigenvector so its first nonzero component is positive."""
    nz = np.flatnonzero(np.abs(v) > 0)
    if len(nz) and v[nz[0]] < 0:
        return -v
    return v.copy()


@dataclass(frozen=True)
class DiagramPoint:
    x: float
    y: float

    def as_tuple(self) -> tuple:
        return (self.x, self.y)


def barycentric_position(distribution: Mapping[str, float],
                         layout: CircleLayout) -> DiagramPoint:
    """Probability-weighted average of country positions.

    The distribution keys must exactly cover the layout's countries; being
    a convex combination of points on the unit circle, the result lies in
    the closed unit disk.
    """
    if set(distribution) != set(layout.countries):
        raise DataError("distribution countries do not match the layout")
    weights = np.array([distribution[c] for c in layout.countries], dtype=np.float64)
    if np.any(weights < 0) or not np.isclose(weights.sum(), 1.0, atol=1e-6):
        raise DataError("distribution must be non-negative and sum to 1")
    point = weights @ layout.positions
    return DiagramPoint(x=float(point[0]), y=float(point[1]))


def _svg_coord(v: float, scale: float, offset: float) -> str:
    return f"{offset + v * scale:.4f}"


def render_svg(layout: CircleLayout,
               points: Optional[Sequence] = None,
               labels: Optional[Sequence[str]] = None,
               size: int = 640) -> str:
    """Deterministic SVG of the circle, country vertices, and trail points.

    points is an optional sequence of DiagramPoints drawn (in order) as a
    polyline trail; labels annotates them. Output bytes depend only on the
    inputs: coordinates are written with fixed precision and no timestamps
    or randomness are involved.
    """
    points = list(points or [])
    labels = list(labels or [])
    if labels and len(labels) != len(points):
        raise DataError("labels must match points one to one")
    half = size / 2.0
    scale = half * 0.82
    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    )
    out.append(f'<rect width="{size}" height="{size}" fill="#ffffff"/>')
    out.append(
        f'<circle cx="{half:.4f}" cy="{half:.4f}" r="{scale:.4f}" '
        'fill="none" stroke="#888888" stroke-width="1"/>'
    )
    for country, (x, y) in zip(layout.countries, layout.positions):
        cx = _svg_coord(x, scale, half)
        cy = _svg_coord(-y, scale, half)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="4" fill="#1f4e79"/>')
        out.append(
            f'<text x="{cx}" y="{cy}" dx="6" dy="-6" font-family="sans-serif" '
            f'font-size="12" fill="#1f4e79">{_xml_escape(country)}</text>'
        )
    if len(points) > 1:
        path = " ".join(
            f"{_svg_coord(p.x, scale, half)},{_svg_coord(-p.y, scale, half)}"
            for p in points
        )
        out.append(
            f'<polyline points="{path}" fill="none" stroke="#c0392b" stroke-width="1.5"/>'
        )
    for i, p in enumerate(points):
        cx = _svg_coord(p.x, scale, half)
        cy = _svg_coord(-p.y, scale, half)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="3" fill="#c0392b"/>')
        if labels:
            out.append(
                f'<text x="{cx}" y="{cy}" dx="5" dy="12" font-family="sans-serif" '
                f'font-size="10" fill="#c0392b">{_xml_escape(labels[i])}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _xml_escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


def layout_to_meta(layout: CircleLayout) -> dict:
    return {
        "countries": list(layout.countries),
        "positions": [[float(x), float(y)] for x, y in layout.positions],
        "eigenvalues": [float(v) for v in layout.eigenvalues],
        "mode": layout.mode,
    }


def layout_from_meta(meta: dict) -> CircleLayout:
    return CircleLayout(
        countries=tuple(meta["countries"]),
        positions=np.array(meta["positions"], dtype=np.float64),
        eigenvalues=np.array(meta["eigenvalues"], dtype=np.float64),
        mode=meta["mode"],
    )
