# Commutative rewriting: completion, normal forms, ideal membership and enumeration.
