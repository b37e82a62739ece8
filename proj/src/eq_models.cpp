namespace equimod {}
