"""bendcode: succinct encoding of labeled planar graphs drawn with polyline
bends on fixed vertex locations, plus the geometric machinery behind it
(convex layer diagrams, support vertices, polygon separators) and an
entropy audit of the bend lower bound."""

__version__ = "0.1.0"
