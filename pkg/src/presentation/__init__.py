# Binoid presentations, combinators and the presentation DSL.
