"""meroforms: exact q-series laboratory for meromorphic modular forms.

Builds the level-1 meromorphic modular forms E_k/(j-c)^r, their CM
derivative combinations, elliptic-curve Frobenius data, truncated
hypergeometric sums and Kohnen-plus-space Shimura lifts, and verifies the
associated congruence, supercongruence and divisibility statements with
exact arithmetic, producing reproducible machine-readable reports.
"""

from .qseries import TruncatedSeries, ZZ, QQ

__version__ = "0.1.0"
__all__ = ["TruncatedSeries", "ZZ", "QQ", "__version__"]
