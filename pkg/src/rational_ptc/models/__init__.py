# Bundled model files
