# Hilbert-Kunz function counting and the counting identity checks.
