# Main source package for binoid-hk containing the algebra, counting and CLI modules.
