# Utility modules: the error hierarchy and computation logging.
