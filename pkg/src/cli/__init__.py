# Command handlers and renderers behind main.py.
