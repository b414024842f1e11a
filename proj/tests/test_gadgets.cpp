// placeholder while the module lands
