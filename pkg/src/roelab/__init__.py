# 一致 Roe 代数上 Hilbert C*-模的有限截断实验室
# Finite-truncation lab for Hilbert C*-modules over uniform Roe algebras
__version__ = "1.0.0"
