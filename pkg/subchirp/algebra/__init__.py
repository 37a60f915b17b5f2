"""Binary symplectic algebra: F2 linear algebra, Sp(2m;2), Heisenberg-Weyl and Clifford operators"""
