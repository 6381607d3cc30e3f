"""topiclens: model-agnostic topic model interpretation engine.

Consumes the topic-term matrix, document-topic matrix, vocabulary and
corpus text produced by any topic model and derives everything needed to
explore it: topic importance, term rankings, 2-D semantic maps, word
associations, group aggregation, document timelines and highlights,
static SVG figures and an HTTP exploration API.
"""

from topiclens._accel import BACKEND as kernel_backend

__version__ = "0.1.0"

__all__ = ["kernel_backend", "__version__"]
