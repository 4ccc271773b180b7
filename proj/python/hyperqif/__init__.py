"""Hyper-distribution representations of adversarial prior knowledge.

Secrets produced under a plurality of strategies are analyzed through an
environment (a distribution on strategies). The module quantifies
environmental vulnerability, strategy vulnerability, model-relative
vulnerability under abstractions, and the perceived-security decomposition,
plus a corpus pipeline for credential datasets.
"""

from hyperqif._core import *  # noqa: F401,F403
from hyperqif._core import __version__  # noqa: F401
